/** Wire types and fetch wrapper for the nlui HTTP service.
 *
 * Field names mirror the JSON bodies exactly. Non-2xx responses become
 * thrown errors; linguistic failures arrive as 200s with outcome "error"
 * and are ordinary CommandResponse values.
 */

export interface Fact {
  predicate: string;
  args: string[];
  value: boolean;
}

export interface CommandResponse {
  kind: "imperative" | "query" | "error";
  outcome: "ok" | "exception" | "error";
  answer?: boolean;
  detail?: string;
  trace?: string[];
  revision: number;
  state: Fact[];
}

export interface StateResponse {
  revision: number;
  state: Fact[];
}

export interface LexiconEntry {
  phrase: string;
  category: string;
  term: string;
}

/** The slice of the service the session controller depends on. */
export interface CommandGateway {
  postCommand(sentence: string): Promise<CommandResponse>;
  getState(): Promise<StateResponse>;
}

export class ServiceClient implements CommandGateway {
  constructor(readonly baseUrl: string) {}

  async postCommand(sentence: string): Promise<CommandResponse> {
    const res = await fetch(`${this.baseUrl}/command`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ sentence }),
    });
    if (!res.ok) {
      throw new Error(`POST /command failed: ${res.status} ${await res.text()}`);
    }
    return (await res.json()) as CommandResponse;
  }

  async getState(): Promise<StateResponse> {
    const res = await fetch(`${this.baseUrl}/state`);
    if (!res.ok) {
      throw new Error(`GET /state failed: ${res.status}`);
    }
    return (await res.json()) as StateResponse;
  }

  async getLexicon(): Promise<LexiconEntry[]> {
    const res = await fetch(`${this.baseUrl}/lexicon`);
    if (!res.ok) {
      throw new Error(`GET /lexicon failed: ${res.status}`);
    }
    const body = (await res.json()) as { entries: LexiconEntry[] };
    return body.entries;
  }
}
