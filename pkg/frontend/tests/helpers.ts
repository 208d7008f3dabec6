/** Test harness: run the real session service as a subprocess. */

import { ChildProcess, spawn } from "node:child_process";

export interface ServiceHandle {
  baseUrl: string;
  stop: () => void;
}

/** Start `treescribe serve` on an ephemeral port and wait until it answers. */
export async function startService(spec = "stocks"): Promise<ServiceHandle> {
  const child: ChildProcess = spawn(
    "python3", ["-m", "treescribe.cli", "serve", "--spec", spec, "--port", "0"],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  const port = await new Promise<number>((resolve, reject) => {
    let buffer = "";
    const timer = setTimeout(
      () => reject(new Error(`service did not start: ${buffer}`)), 30000);
    child.stderr!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/listening on 127\.0\.0\.1:(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(Number(match[1]));
      }
    });
    child.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited early (${code}): ${buffer}`));
    });
  });
  const baseUrl = `http://127.0.0.1:${port}`;
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${baseUrl}/rpc`, {
        method: "POST", body: JSON.stringify({ op: "get_tree", session: "none" }),
      });
      if (resp.ok) break;
    } catch {
      await sleep(50);
    }
  }
  return { baseUrl, stop: () => child.kill() };
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Poll until the condition holds (UI handlers are fire-and-forget async). */
export async function until(
  condition: () => boolean, timeoutMs = 5000, label = "condition",
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (condition()) return;
    await sleep(10);
  }
  throw new Error(`timed out waiting for ${label}`);
}

export function key(target: EventTarget, keyName: string,
                    init: KeyboardEventInit = {}): void {
  target.dispatchEvent(new KeyboardEvent("keydown",
    { key: keyName, bubbles: true, cancelable: true, ...init }));
}

export function type(input: HTMLInputElement, text: string): void {
  input.value = text;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}
