/** Shared test scaffolding: a routing fake for fetch and microtask flushing. */

import type { FetchLike } from "../src/api.js";

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
}

export interface FakeServer {
  fetchFn: FetchLike;
  calls: RecordedCall[];
  /** Route table: "METHOD /path/prefix" -> responder. */
  routes: Map<string, (body: unknown, path: string) => { status?: number; body: unknown }>;
  fail: boolean; // simulate network loss
}

export function fakeServer(): FakeServer {
  const server: FakeServer = {
    calls: [],
    routes: new Map(),
    fail: false,
    fetchFn: async (input, init) => {
      if (server.fail) {
        throw new TypeError("fetch failed");
      }
      const method = init?.method ?? "GET";
      const url = new URL(input, "http://fake.test");
      const path = url.pathname + url.search;
      const body = init?.body ? JSON.parse(init.body as string) : undefined;
      server.calls.push({ method, path, body });
      for (const [key, responder] of server.routes) {
        const [routeMethod, routePrefix] = key.split(" ", 2);
        if (method === routeMethod && path.startsWith(routePrefix)) {
          const result = responder(body, path);
          return new Response(JSON.stringify(result.body), {
            status: result.status ?? 200,
            headers: { "Content-Type": "application/json" },
          });
        }
      }
      return new Response(JSON.stringify({ error: { code: "UNKNOWN", message: `no route ${method} ${path}` } }), {
        status: 500,
        headers: { "Content-Type": "application/json" },
      });
    },
  };
  return server;
}

export async function flush(times = 6): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function sampleRound(overrides: Partial<Record<string, unknown>> = {}) {
  return {
    ticket_id: "t-test-1",
    prompt: "Which option is right?",
    response_a: "Response from the first anonymous model.",
    response_b: "Response from the second anonymous model.",
    judge_verdict_c: null,
    judge_verdict_d: null,
    ...overrides,
  };
}

export function clickByText(root: HTMLElement, selector: string, text: string): HTMLElement {
  const nodes = Array.from(root.querySelectorAll(selector)) as HTMLElement[];
  const target = nodes.find((node) => node.textContent === text);
  if (!target) {
    throw new Error(`no ${selector} with text ${JSON.stringify(text)}; saw: ${nodes.map((n) => n.textContent)}`);
  }
  target.click();
  return target;
}
