/** Session view-model.
 *
 * Holds everything the page displays and mutates the world only through
 * POST /command. At most one command is in flight at a time, matching
 * the service's one-at-a-time execution; the input is disabled while
 * pending, and this guard also swallows double-submit races.
 */

import type { CommandGateway, CommandResponse, Fact } from "./api.js";

export interface HistoryEntry {
  sentence: string;
  kind: string;
  outcome: string;
  summary: string;
}

function summarize(r: CommandResponse): string {
  if (r.kind === "query") {
    return r.answer === true ? "yes" : "no";
  }
  if (r.outcome === "ok") {
    return "ok";
  }
  return r.detail ?? r.outcome;
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

export class Session {
  revision = -1;
  facts: Fact[] = [];
  /** Every served command, oldest first; network failures never append. */
  history: HistoryEntry[] = [];
  traceVisible = false;
  pending = false;
  lastResponse: CommandResponse | null = null;
  networkError: string | null = null;
  /** Sentence to resubmit via retry() after a network failure. */
  failedSentence: string | null = null;

  constructor(private gateway: CommandGateway) {}

  async refresh(): Promise<void> {
    try {
      const s = await this.gateway.getState();
      this.revision = s.revision;
      this.facts = s.state;
    } catch (err) {
      this.networkError = describe(err);
    }
  }

  async submit(sentence: string): Promise<void> {
    const text = sentence.trim();
    if (text === "" || this.pending) {
      return;
    }
    this.pending = true;
    this.networkError = null;

    let r: CommandResponse;
    try {
      r = await this.gateway.postCommand(text);
    } catch (err) {
      this.networkError = describe(err);
      this.failedSentence = text;
      this.pending = false;
      return;
    }

    const before = this.revision;
    this.lastResponse = r;
    this.failedSentence = null;
    this.history.push({ sentence: text, kind: r.kind, outcome: r.outcome, summary: summarize(r) });
    this.revision = r.revision;
    this.facts = r.state;

    // A larger revision jump than our own command explains means another
    // client got in between; converge on the canonical snapshot.
    const ownBump = r.kind === "imperative" ? 1 : 0;
    if (before >= 0 && r.revision !== before + ownBump) {
      await this.refresh();
    }
    this.pending = false;
  }

  async retry(): Promise<void> {
    if (this.failedSentence !== null) {
      await this.submit(this.failedSentence);
    }
  }
}
