/**
 * Client for the treescribe session protocol: one JSON message per POST.
 * Requests are queued FIFO so at most one is in flight per session.
 */

export interface Announcement {
  text: string;
  source: string;
}

export interface TreeNode {
  id: string;
  level: string;
  depth: number;
  label: string;
  parent: string | null;
  children: string[];
}

export interface TokenEntry {
  kind: string;
  setting: string; // off | short | long
}

export interface InitResponse {
  ok: boolean;
  session: string;
  seq: number;
  levels: string[];
  cursor: string;
  announcement: Announcement;
}

export interface SettingsResponse {
  ok: boolean;
  settings: { version: number; active: Record<string, string>; custom: unknown[] };
  active_entries: Record<string, TokenEntry[]>;
  presets: Record<string, string[]>;
  tokens: Record<string, string[]>;
}

export interface RpcError {
  code: string;
  message: string;
}

export class ProtocolError extends Error {
  constructor(public readonly rpcError: RpcError) {
    super(rpcError.message);
  }
}

export class SessionClient {
  private sessionId: string | null = null;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(private readonly baseUrl: string) {}

  /** Serialize calls: the next request starts after the previous settles. */
  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(task, task);
    this.queue = next.catch(() => undefined);
    return next;
  }

  private rpc<T>(payload: Record<string, unknown>): Promise<T> {
    return this.enqueue(async () => {
      const body = this.sessionId
        ? { ...payload, session: this.sessionId }
        : payload;
      const resp = await fetch(`${this.baseUrl}/rpc`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
      const message = (await resp.json()) as T & { ok: boolean; error?: RpcError };
      if (!message.ok && message.error) {
        throw new ProtocolError(message.error);
      }
      return message;
    });
  }

  async init(): Promise<InitResponse> {
    const resp = await this.rpc<InitResponse>({ op: "init" });
    this.sessionId = resp.session;
    return resp;
  }

  navigate(key: string): Promise<{ cursor: string; announcement: Announcement }> {
    return this.rpc({ op: "navigate", key });
  }

  command(command: string): Promise<{ cursor: string; announcement?: Announcement }> {
    return this.rpc({ op: "command", command });
  }

  getTree(): Promise<{ cursor: string; tree: TreeNode[] }> {
    return this.rpc({ op: "get_tree" });
  }

  getSettings(): Promise<SettingsResponse> {
    return this.rpc({ op: "get_settings" });
  }

  setPreset(level: string, name: string): Promise<{ announcement: Announcement }> {
    return this.rpc({ op: "set_preset", level, name });
  }

  createPreset(
    name: string,
    level: string,
    entries: TokenEntry[],
  ): Promise<{ announcement: Announcement }> {
    return this.rpc({ op: "create_preset", name, level, entries });
  }
}
