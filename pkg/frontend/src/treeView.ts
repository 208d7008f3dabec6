/**
 * ARIA tree view over the session's hierarchy.
 *
 * Labels come verbatim from the core's describe output (the get_tree
 * protocol op); this widget never synthesizes its own text. Only the
 * path to the cursor is expanded, matching the collapsed-by-default
 * levels, and all movement is keyboard driven: arrows plus the x/y
 * axis shortcuts are forwarded to the core, which owns the cursor.
 */

import { Announcer } from "./announcer.js";
import { SessionClient, TreeNode } from "./protocol.js";

const KEY_TO_NAV: Record<string, string> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  x: "x",
  y: "y",
};

export class TreeView {
  readonly element: HTMLUListElement;
  private items = new Map<string, HTMLLIElement>();
  private nodes = new Map<string, TreeNode>();
  private cursor = "";
  private rootId = "";

  constructor(
    container: HTMLElement,
    private readonly client: SessionClient,
    private readonly announcer: Announcer,
    private readonly onError: (message: string) => void,
  ) {
    this.element = document.createElement("ul");
    this.element.setAttribute("role", "tree");
    this.element.setAttribute("aria-label", "chart description");
    this.element.addEventListener("keydown", (e) => this.onKeydown(e));
    container.appendChild(this.element);
  }

  get cursorId(): string {
    return this.cursor;
  }

  label(id: string): string {
    return this.nodes.get(id)?.label ?? "";
  }

  /** Fetch the node list and rebuild the DOM, keeping the cursor focused. */
  async refresh(): Promise<void> {
    let payload: { cursor: string; tree: TreeNode[] };
    try {
      payload = await this.client.getTree();
    } catch (err) {
      this.onError(`connection lost: ${(err as Error).message}`);
      return;
    }
    this.cursor = payload.cursor;
    this.nodes = new Map(payload.tree.map((n) => [n.id, n]));
    this.rootId = payload.tree[0].id;
    this.element.textContent = "";
    this.items.clear();
    this.element.appendChild(this.buildItem(payload.tree[0]));
    this.applyCursor(false);
  }

  private buildItem(node: TreeNode): HTMLLIElement {
    const li = document.createElement("li");
    li.setAttribute("role", "treeitem");
    li.setAttribute("aria-level", String(node.depth));
    li.id = `tree-${node.id}`;
    li.tabIndex = -1;
    const label = document.createElement("span");
    label.className = "tree-label";
    label.textContent = node.label;
    li.appendChild(label);
    this.items.set(node.id, li);
    if (node.children.length > 0) {
      li.setAttribute("aria-expanded", "false");
      const group = document.createElement("ul");
      group.setAttribute("role", "group");
      group.hidden = true;
      for (const childId of node.children) {
        const child = this.nodes.get(childId);
        if (child) group.appendChild(this.buildItem(child));
      }
      li.appendChild(group);
    }
    return li;
  }

  /** Expand exactly the ancestors of the cursor; focus its item. */
  private applyCursor(focus: boolean): void {
    const onPath = new Set<string>();
    let walk = this.nodes.get(this.cursor)?.parent ?? null;
    while (walk !== null) {
      onPath.add(walk);
      walk = this.nodes.get(walk)?.parent ?? null;
    }
    for (const [id, li] of this.items) {
      const group = li.querySelector(":scope > ul[role=group]") as HTMLUListElement | null;
      const expanded = onPath.has(id);
      if (group) {
        li.setAttribute("aria-expanded", expanded ? "true" : "false");
        group.hidden = !expanded;
      }
      li.setAttribute("aria-selected", id === this.cursor ? "true" : "false");
      li.tabIndex = id === this.cursor ? 0 : -1;
    }
    if (focus) {
      this.items.get(this.cursor)?.focus();
    }
  }

  focusCursor(): void {
    this.items.get(this.cursor)?.focus();
  }

  private onKeydown(event: KeyboardEvent): void {
    const nav = KEY_TO_NAV[event.key];
    if (!nav) return;
    event.preventDefault();
    void this.moveCursor(nav);
  }

  async moveCursor(key: string): Promise<void> {
    let result: { cursor: string; announcement: { text: string } };
    try {
      result = await this.client.navigate(key);
    } catch (err) {
      this.onError(`connection lost: ${(err as Error).message}`);
      return;
    }
    this.cursor = result.cursor;
    this.applyCursor(true);
    this.announcer.announce(result.announcement.text);
  }

  /** Re-read labels after a settings or command change, keeping position. */
  async refreshLabels(): Promise<void> {
    let payload: { cursor: string; tree: TreeNode[] };
    try {
      payload = await this.client.getTree();
    } catch (err) {
      this.onError(`connection lost: ${(err as Error).message}`);
      return;
    }
    this.cursor = payload.cursor;
    for (const node of payload.tree) {
      this.nodes.set(node.id, node);
      const li = this.items.get(node.id);
      const span = li?.querySelector(":scope > .tree-label");
      if (span) span.textContent = node.label;
    }
    this.applyCursor(false);
  }
}
