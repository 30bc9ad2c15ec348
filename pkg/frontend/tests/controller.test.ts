import { expect, test } from "vitest";
import type { CommandGateway, CommandResponse, Fact, StateResponse } from "../src/api.js";
import { Session } from "../src/controller.js";

const S1: Fact[] = [
  { predicate: "is_on", args: ["block 1", "the table"], value: true },
  { predicate: "is_on", args: ["block 2", "the table"], value: true },
];
const S3: Fact[] = [
  { predicate: "is_on", args: ["block 1", "the table"], value: true },
  { predicate: "is_on", args: ["block 2", "block 1"], value: true },
];

class FakeGateway implements CommandGateway {
  stateCalls = 0;
  commands: string[] = [];
  state: StateResponse = { revision: 0, state: S1 };
  script: (sentence: string) => Promise<CommandResponse> = () =>
    Promise.reject(new Error("no scripted response"));

  async getState(): Promise<StateResponse> {
    this.stateCalls += 1;
    return structuredClone(this.state);
  }

  async postCommand(sentence: string): Promise<CommandResponse> {
    this.commands.push(sentence);
    return this.script(sentence);
  }
}

test("refresh adopts the service snapshot", async () => {
  const gw = new FakeGateway();
  const session = new Session(gw);
  await session.refresh();
  expect(session.revision).toBe(0);
  expect(session.facts).toEqual(S1);
  expect(session.networkError).toBeNull();
});

test("a served imperative appends history and adopts the returned state", async () => {
  const gw = new FakeGateway();
  gw.script = async () => ({
    kind: "imperative",
    outcome: "ok",
    trace: ["value: skip"],
    revision: 1,
    state: S3,
  });
  const session = new Session(gw);
  await session.refresh();
  await session.submit("  move block two on block one  ");
  expect(session.history).toEqual([
    {
      sentence: "move block two on block one",
      kind: "imperative",
      outcome: "ok",
      summary: "ok",
    },
  ]);
  expect(session.revision).toBe(1);
  expect(session.facts).toEqual(S3);
  // the revision moved exactly as our own command explains: no refetch
  expect(gw.stateCalls).toBe(1);
});

test("query summaries are yes/no and never refetch on a steady revision", async () => {
  const gw = new FakeGateway();
  gw.script = async () => ({
    kind: "query",
    outcome: "ok",
    answer: false,
    trace: ["value: false"],
    revision: 0,
    state: S1,
  });
  const session = new Session(gw);
  await session.refresh();
  await session.submit("block one is on block two?");
  expect(session.history[0]?.summary).toBe("no");
  expect(session.revision).toBe(0);
  expect(gw.stateCalls).toBe(1);
});

test("exception and parse-error responses still append to history", async () => {
  const gw = new FakeGateway();
  gw.script = async () => ({
    kind: "imperative",
    outcome: "exception",
    detail: "guard rejected move(the table, block 1): argument classes mismatch",
    trace: ["value: *"],
    revision: 1,
    state: S1,
  });
  const session = new Session(gw);
  await session.refresh();
  await session.submit("move the table on block one");

  gw.script = async () => ({
    kind: "error",
    outcome: "error",
    detail: "unknown vocabulary in 'move the doughnut'",
    revision: 1,
    state: S1,
  });
  await session.submit("move the doughnut");

  expect(session.history.map((h) => h.outcome)).toEqual(["exception", "error"]);
  expect(session.history[0]?.summary).toContain("guard rejected");
  expect(session.history[1]?.summary).toContain("unknown vocabulary");
});

test("a network failure leaves history untouched and retry resubmits", async () => {
  const gw = new FakeGateway();
  gw.script = () => Promise.reject(new Error("connection refused"));
  const session = new Session(gw);
  await session.refresh();
  await session.submit("move block one on block two");

  expect(session.history).toEqual([]);
  expect(session.networkError).toBe("connection refused");
  expect(session.failedSentence).toBe("move block one on block two");

  gw.script = async () => ({
    kind: "imperative",
    outcome: "ok",
    revision: 1,
    state: S3,
  });
  await session.retry();
  expect(gw.commands).toEqual([
    "move block one on block two",
    "move block one on block two",
  ]);
  expect(session.history).toHaveLength(1);
  expect(session.networkError).toBeNull();
  expect(session.failedSentence).toBeNull();
});

test("at most one command is in flight; extra submits are dropped", async () => {
  const gw = new FakeGateway();
  let release: (r: CommandResponse) => void = () => undefined;
  gw.script = () =>
    new Promise<CommandResponse>((resolve) => {
      release = resolve;
    });
  const session = new Session(gw);
  await session.refresh();

  const first = session.submit("move block one on block two");
  expect(session.pending).toBe(true);
  await session.submit("move block two on block one");
  expect(gw.commands).toEqual(["move block one on block two"]);

  release({ kind: "imperative", outcome: "ok", revision: 1, state: S3 });
  await first;
  expect(session.pending).toBe(false);
  expect(session.history).toHaveLength(1);
});

test("an unexplained revision jump triggers a state refetch", async () => {
  const gw = new FakeGateway();
  gw.script = async () => ({
    kind: "query",
    outcome: "ok",
    answer: true,
    revision: 5,
    state: S1,
  });
  const session = new Session(gw);
  await session.refresh();
  expect(session.revision).toBe(0);

  gw.state = { revision: 5, state: S3 };
  await session.submit("block one is on the table?");
  // one refetch beyond the initial refresh, converging on the snapshot
  expect(gw.stateCalls).toBe(2);
  expect(session.revision).toBe(5);
  expect(session.facts).toEqual(S3);
});

test("blank input is a no-op", async () => {
  const gw = new FakeGateway();
  const session = new Session(gw);
  await session.submit("   ");
  expect(gw.commands).toEqual([]);
  expect(session.pending).toBe(false);
});

test("a failed refresh reports the network error and keeps old facts", async () => {
  const gw = new FakeGateway();
  const session = new Session(gw);
  await session.refresh();
  gw.getState = () => Promise.reject(new Error("connection reset"));
  await session.refresh();
  expect(session.networkError).toBe("connection reset");
  expect(session.facts).toEqual(S1);
});
