/** Markup builders for every pane on the page.
 *
 * All of these are pure functions of the data they are given, so the same
 * facts always produce the same picture; the DOM layer in main.ts only
 * assigns their output to innerHTML.
 */

import type { CommandResponse, Fact } from "./api.js";
import { BLOCK_1, BLOCK_2, TABLE, deriveScene, type WorldScene } from "./scene.js";
import type { HistoryEntry } from "./controller.js";

const VIEW_W = 360;
const VIEW_H = 240;
const SIDE = 70;
const TABLE_TOP = 186;

// Each block owns a column; a stacked block is drawn in its support's
// column, one block-height higher.
const HOME_X: Record<string, number> = { [BLOCK_1]: 75, [BLOCK_2]: 215 };

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function restingPoint(block: string, on: string): { x: number; y: number } {
  if (on === TABLE) {
    return { x: HOME_X[block]!, y: TABLE_TOP - SIDE };
  }
  return { x: HOME_X[on]!, y: TABLE_TOP - 2 * SIDE };
}

function blockMarkup(x: number, y: number, fill: string, label: string): string {
  const cx = x + SIDE / 2;
  const cy = y + SIDE / 2 + 7;
  return (
    `<rect x="${x}" y="${y}" width="${SIDE}" height="${SIDE}" rx="6" fill="${fill}" stroke="#1f2430" stroke-width="2"/>` +
    `<text x="${cx}" y="${cy}" text-anchor="middle" font-size="22" fill="#fff">${label}</text>`
  );
}

export function renderWorld(scene: WorldScene): string {
  const p1 = restingPoint(BLOCK_1, scene.block1On);
  const p2 = restingPoint(BLOCK_2, scene.block2On);
  return (
    `<svg viewBox="0 0 ${VIEW_W} ${VIEW_H}" xmlns="http://www.w3.org/2000/svg" role="img" aria-label="blocks world">` +
    `<rect x="20" y="${TABLE_TOP}" width="${VIEW_W - 40}" height="16" fill="#8a6a4a"/>` +
    `<rect x="44" y="${TABLE_TOP + 16}" width="12" height="30" fill="#6f5439"/>` +
    `<rect x="${VIEW_W - 56}" y="${TABLE_TOP + 16}" width="12" height="30" fill="#6f5439"/>` +
    blockMarkup(p1.x, p1.y, "#c25454", "1") +
    blockMarkup(p2.x, p2.y, "#4e6fbe", "2") +
    `</svg>`
  );
}

/** The world picture, or an error banner plus the raw facts when they do
 * not describe a drawable configuration. */
export function renderScenePane(facts: Fact[]): string {
  const scene = deriveScene(facts);
  if (scene.kind === "world") {
    return renderWorld(scene);
  }
  const raw = facts.map((f) => `${f.predicate}(${f.args.join(", ")}) = ${f.value}`);
  return (
    `<div class="banner error">cannot draw the world: ${escapeHtml(scene.reason)}</div>` +
    `<pre class="raw-facts">${escapeHtml(raw.join("\n"))}</pre>`
  );
}

export interface BannerState {
  networkError: string | null;
  failedSentence: string | null;
  lastResponse: CommandResponse | null;
}

const AMBIGUITY_MARKER = "ambiguous between: ";

export function renderBanner(s: BannerState): string {
  if (s.networkError !== null) {
    const retry = s.failedSentence !== null ? ` <button id="retry">retry</button>` : "";
    return `<div class="banner error">service unreachable: ${escapeHtml(s.networkError)}${retry}</div>`;
  }
  const r = s.lastResponse;
  if (r === null) {
    return "";
  }
  if (r.outcome === "exception") {
    return `<div class="banner exception">${escapeHtml(r.detail ?? "exception")}</div>`;
  }
  if (r.outcome === "error") {
    const detail = r.detail ?? "error";
    const at = detail.indexOf(AMBIGUITY_MARKER);
    if (at >= 0) {
      const head = detail.slice(0, at + AMBIGUITY_MARKER.length);
      const items = detail
        .slice(at + AMBIGUITY_MARKER.length)
        .split("; ")
        .map((c) => `<li><code>${escapeHtml(c)}</code></li>`)
        .join("");
      return `<div class="banner error">${escapeHtml(head)}<ul>${items}</ul></div>`;
    }
    return `<div class="banner error">${escapeHtml(detail)}</div>`;
  }
  return "";
}

export function renderHistory(entries: HistoryEntry[]): string {
  return entries
    .map(
      (h) =>
        `<li class="${h.outcome}"><span class="spoken">${escapeHtml(h.sentence)}</span>` +
        ` — ${escapeHtml(h.summary)}</li>`,
    )
    .join("");
}

export function renderTrace(r: CommandResponse | null): string {
  if (r === null || r.trace === undefined) {
    return "";
  }
  return r.trace.join("\n");
}
