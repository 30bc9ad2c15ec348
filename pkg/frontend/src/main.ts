import { ServiceClient } from "./api.js";
import { Session } from "./controller.js";
import { renderBanner, renderHistory, renderScenePane, renderTrace } from "./render.js";

function serviceBase(): string {
  // ?service=http://host:port overrides the default local service
  const override = new URLSearchParams(window.location.search).get("service");
  return override ?? "http://127.0.0.1:8471";
}

window.addEventListener("DOMContentLoaded", () => {
  const input = document.getElementById("sentence") as HTMLInputElement;
  const sendBtn = document.getElementById("send") as HTMLButtonElement;
  const refreshBtn = document.getElementById("refresh") as HTMLButtonElement;
  const traceToggle = document.getElementById("trace-toggle") as HTMLInputElement;
  const sceneBox = document.getElementById("scene") as HTMLDivElement;
  const bannerBox = document.getElementById("banner") as HTMLDivElement;
  const answerBadge = document.getElementById("answer") as HTMLSpanElement;
  const revisionLabel = document.getElementById("revision") as HTMLSpanElement;
  const historyList = document.getElementById("history") as HTMLUListElement;
  const tracePane = document.getElementById("trace") as HTMLPreElement;

  const session = new Session(new ServiceClient(serviceBase()));

  function render(): void {
    input.disabled = session.pending;
    sendBtn.disabled = session.pending;
    revisionLabel.textContent = session.revision < 0 ? "" : `revision ${session.revision}`;

    sceneBox.innerHTML = renderScenePane(session.facts);
    bannerBox.innerHTML = renderBanner(session);

    const retryBtn = document.getElementById("retry") as HTMLButtonElement | null;
    if (retryBtn !== null) {
      retryBtn.onclick = () => {
        void session.retry().then(render);
      };
    }

    const r = session.lastResponse;
    answerBadge.textContent = r !== null && r.kind === "query" ? (r.answer === true ? "yes" : "no") : "";

    historyList.innerHTML = renderHistory(session.history);
    tracePane.hidden = !session.traceVisible;
    tracePane.textContent = session.traceVisible ? renderTrace(r) : "";
  }

  async function send(): Promise<void> {
    const finished = session.submit(input.value);
    render(); // shows the disabled input while the command is in flight
    await finished;
    if (session.networkError === null) {
      input.value = "";
    }
    render();
    input.focus();
  }

  sendBtn.onclick = () => {
    void send();
  };
  input.addEventListener("keydown", (e) => {
    if (e.key === "Enter") {
      void send();
    }
  });
  refreshBtn.onclick = () => {
    void session.refresh().then(render);
  };
  traceToggle.onchange = () => {
    session.traceVisible = traceToggle.checked;
    render();
  };

  void session.refresh().then(render);
});
