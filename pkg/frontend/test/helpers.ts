/** Test doubles: a recording fetch that serves captured API fixtures,
 * and a manually-resolvable fetch for response-ordering tests. */

import { FetchLike, ResponseLike } from "../src/api.js";

export function responseOf(body: unknown, status = 200): ResponseLike {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: () => Promise.resolve(body),
  };
}

export type Route = [match: string | RegExp, body: unknown, status?: number];

export interface RecordingFetch {
  fetch: FetchLike;
  calls: string[];
  count(pattern: string | RegExp): number;
}

export function fixtureFetch(routes: Route[]): RecordingFetch {
  const calls: string[] = [];
  const fetch: FetchLike = (url) => {
    calls.push(url);
    for (const [match, body, status] of routes) {
      const hit = typeof match === "string" ? url.includes(match) : match.test(url);
      if (hit) return Promise.resolve(responseOf(body, status ?? 200));
    }
    return Promise.reject(new Error(`unrouted request: ${url}`));
  };
  return {
    fetch,
    calls,
    count(pattern) {
      return calls.filter((u) =>
        typeof pattern === "string" ? u.includes(pattern) : pattern.test(u),
      ).length;
    },
  };
}

export interface DeferredFetch {
  fetch: FetchLike;
  calls: string[];
  /** Resolve the i-th recorded request (0-based) with a body. */
  resolve(index: number, body: unknown): void;
}

export function deferredFetch(): DeferredFetch {
  const calls: string[] = [];
  const resolvers: ((res: ResponseLike) => void)[] = [];
  return {
    calls,
    fetch: (url) => {
      calls.push(url);
      return new Promise((resolve) => {
        resolvers.push(resolve);
      });
    },
    resolve(index, body) {
      resolvers[index](responseOf(body));
    },
  };
}

/** Let fetch-then-render microtask chains settle. */
export async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}
