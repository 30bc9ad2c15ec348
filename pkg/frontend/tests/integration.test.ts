/** End-to-end round trip against a live service process.
 *
 * Spawns `python -m nlui serve` on an ephemeral port (the Python package
 * must be installed), then drives the same objects the page uses: the
 * session controller plus the pure renderers.
 */

import { afterAll, beforeAll, expect, test } from "vitest";
import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { ServiceClient } from "../src/api.js";
import { Session } from "../src/controller.js";
import { BLOCK_1, TABLE, deriveScene } from "../src/scene.js";
import { renderBanner, renderScenePane } from "../src/render.js";

let server: ChildProcessWithoutNullStreams;
let session: Session;
let client: ServiceClient;

beforeAll(async () => {
  server = spawn("python3", ["-u", "-m", "nlui", "serve", "--port", "0"]);
  const base = await new Promise<string>((resolve, reject) => {
    let sofar = "";
    const timer = setTimeout(
      () => reject(new Error(`service never announced a port; output: ${sofar}`)),
      10_000,
    );
    server.stdout.on("data", (chunk: Buffer) => {
      sofar += chunk.toString();
      const m = sofar.match(/listening on (http:\/\/[\d.]+:\d+)/);
      if (m !== null) {
        clearTimeout(timer);
        resolve(m[1]!);
      }
    });
    server.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited early (${code}); output: ${sofar}`));
    });
  });
  client = new ServiceClient(base);
  session = new Session(client);
}, 20_000);

afterAll(() => {
  server.kill();
});

test("moving block two on block one re-renders the stack and logs ok", async () => {
  await session.refresh();
  expect(session.networkError).toBeNull();
  expect(deriveScene(session.facts)).toEqual({
    kind: "world",
    block1On: TABLE,
    block2On: TABLE,
  });

  await session.submit("move block two on block one");

  expect(deriveScene(session.facts)).toEqual({
    kind: "world",
    block1On: TABLE,
    block2On: BLOCK_1,
  });
  const markup = renderScenePane(session.facts);
  const corners = [...markup.matchAll(/<rect x="(\d+)" y="(\d+)" width="70"/g)].map((m) => [
    Number(m[1]),
    Number(m[2]),
  ]) as Array<[number, number]>;
  expect(corners).toHaveLength(2);
  // block 2 sits in block 1's column, one block-height above it
  expect(corners[1]![0]).toBe(corners[0]![0]);
  expect(corners[1]![1]).toBe(corners[0]![1] - 70);

  expect(session.history).toHaveLength(1);
  expect(session.history[0]).toMatchObject({
    sentence: "move block two on block one",
    kind: "imperative",
    outcome: "ok",
    summary: "ok",
  });
  expect(session.revision).toBe(1);
}, 15_000);

test("the class-violating sentence leaves the scene unchanged and raises the banner", async () => {
  const before = renderScenePane(session.facts);

  await session.submit("move the table on block one");

  expect(renderScenePane(session.facts)).toBe(before);
  expect(session.lastResponse?.outcome).toBe("exception");
  const banner = renderBanner(session);
  expect(banner).toContain("banner exception");
  expect(banner).toContain("guard rejected move(the table, block 1)");
  expect(banner).toContain("argument classes");
  expect(session.history).toHaveLength(2);
  expect(session.history[1]?.outcome).toBe("exception");
  // a rejected action still counts as an executed command
  expect(session.revision).toBe(2);
}, 15_000);

test("queries answer without disturbing the scene or the revision", async () => {
  const before = renderScenePane(session.facts);

  await session.submit("block two is on block one?");
  expect(session.history[2]?.summary).toBe("yes");
  expect(renderScenePane(session.facts)).toBe(before);
  expect(session.revision).toBe(2);

  await session.submit("block one is on block two?");
  expect(session.history[3]?.summary).toBe("no");
}, 15_000);

test("linguistic failures surface as error banners, not transport faults", async () => {
  await session.submit("move the doughnut");
  expect(session.networkError).toBeNull();
  expect(session.lastResponse?.outcome).toBe("error");
  expect(renderBanner(session)).toContain("unknown vocabulary");
  expect(session.revision).toBe(2);
}, 15_000);

test("the lexicon route lists the vocabulary the page may suggest", async () => {
  const entries = await client.getLexicon();
  expect(entries.map((e) => e.phrase)).toContain("move");
  expect(entries.find((e) => e.phrase === "move")?.category).toBe("(a/pp)/np");
}, 15_000);
