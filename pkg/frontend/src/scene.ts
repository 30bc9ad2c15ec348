/** Pure derivation of a drawable scene from the service's is_on facts.
 *
 * The service reports one guarded fact per (block, position) pair — six in
 * all, since either block may serve as a position. A consistent
 * configuration gives each block exactly one support, never itself, and
 * never both blocks on each other. Anything else is reported as invalid
 * so the page shows the raw facts instead of a guessed picture.
 */

import type { Fact } from "./api.js";

export const BLOCK_1 = "block 1";
export const BLOCK_2 = "block 2";
export const TABLE = "the table";

const BLOCKS = [BLOCK_1, BLOCK_2] as const;
const POSITIONS = [BLOCK_1, BLOCK_2, TABLE] as const;

export interface WorldScene {
  kind: "world";
  block1On: typeof TABLE | typeof BLOCK_2;
  block2On: typeof TABLE | typeof BLOCK_1;
}

export interface InvalidScene {
  kind: "invalid";
  reason: string;
}

export type Scene = WorldScene | InvalidScene;

function invalid(reason: string): InvalidScene {
  return { kind: "invalid", reason };
}

export function deriveScene(facts: Fact[]): Scene {
  if (facts.length === 0) {
    return invalid("no facts reported");
  }

  const truth = new Map<string, boolean>();
  for (const f of facts) {
    const shown = `${f.predicate}(${f.args.join(", ")})`;
    if (f.predicate !== "is_on" || f.args.length !== 2) {
      return invalid(`unrecognized fact ${shown}`);
    }
    const [a, b] = f.args as [string, string];
    if (!(BLOCKS as readonly string[]).includes(a) || !(POSITIONS as readonly string[]).includes(b)) {
      return invalid(`unrecognized objects in ${shown}`);
    }
    const key = `${a}|${b}`;
    const seen = truth.get(key);
    if (seen !== undefined && seen !== f.value) {
      return invalid(`contradictory reports for ${shown}`);
    }
    truth.set(key, f.value);
  }

  for (const block of BLOCKS) {
    for (const p of POSITIONS) {
      if (!truth.has(`${block}|${p}`)) {
        return invalid(`missing fact is_on(${block}, ${p})`);
      }
    }
  }

  const support: Record<string, string> = {};
  for (const block of BLOCKS) {
    const resting = POSITIONS.filter((p) => truth.get(`${block}|${p}`) === true);
    if (resting.length !== 1) {
      return invalid(`${block} rests on ${resting.length} things, expected exactly one`);
    }
    if (resting[0] === block) {
      return invalid(`${block} rests on itself`);
    }
    support[block] = resting[0]!;
  }
  if (support[BLOCK_1] === BLOCK_2 && support[BLOCK_2] === BLOCK_1) {
    return invalid("the blocks rest on each other");
  }

  return {
    kind: "world",
    block1On: support[BLOCK_1] as WorldScene["block1On"],
    block2On: support[BLOCK_2] as WorldScene["block2On"],
  };
}
