/**
 * Modal settings dialog: a bounded space the user cannot focus into while
 * closed or out of while open. One section per hierarchy level with a
 * preset dropdown and a description of the active customization, plus a
 * builder for new presets (per-token off/short/long, reorder with
 * Alt+ArrowUp/ArrowDown, name, save).
 */

import { Announcer } from "./announcer.js";
import { SessionClient, SettingsResponse, TokenEntry } from "./protocol.js";

const LEVELS = ["facet", "axis", "section", "datapoint"];

export class SettingsMenu {
  readonly openButton: HTMLButtonElement;
  readonly dialog: HTMLDivElement;
  private restoreTarget: HTMLElement | null = null;
  private descriptions = new Map<string, HTMLParagraphElement>();
  private dropdowns = new Map<string, HTMLSelectElement>();
  private builderLevel!: HTMLSelectElement;
  private builderRows!: HTMLUListElement;
  private builderName!: HTMLInputElement;
  private builderError!: HTMLParagraphElement;
  private tokensByLevel: Record<string, string[]> = {};

  constructor(
    container: HTMLElement,
    private readonly client: SessionClient,
    private readonly announcer: Announcer,
    private readonly onSettingsChanged: () => Promise<void>,
  ) {
    this.openButton = document.createElement("button");
    this.openButton.type = "button";
    this.openButton.textContent = "Settings";
    this.openButton.addEventListener("click", () => void this.open());
    container.appendChild(this.openButton);

    this.dialog = document.createElement("div");
    this.dialog.setAttribute("role", "dialog");
    this.dialog.setAttribute("aria-modal", "true");
    this.dialog.setAttribute("aria-label", "Description settings");
    this.dialog.hidden = true;
    this.dialog.addEventListener("keydown", (e) => this.onDialogKeydown(e));
    container.appendChild(this.dialog);
    this.buildSkeleton();
  }

  get isOpen(): boolean {
    return !this.dialog.hidden;
  }

  private buildSkeleton(): void {
    const close = document.createElement("button");
    close.type = "button";
    close.textContent = "Close settings";
    close.addEventListener("click", () => this.close());
    this.dialog.appendChild(close);

    for (const level of LEVELS) {
      const section = document.createElement("section");
      const heading = document.createElement("h3");
      heading.textContent = level.charAt(0).toUpperCase() + level.slice(1);
      section.appendChild(heading);

      const description = document.createElement("p");
      description.id = `preset-description-${level}`;
      this.descriptions.set(level, description);
      section.appendChild(description);

      const label = document.createElement("label");
      label.textContent = `${heading.textContent} preset`;
      const dropdown = document.createElement("select");
      dropdown.setAttribute("aria-describedby", description.id);
      dropdown.addEventListener("change", () =>
        void this.applyPreset(level, dropdown.value));
      label.appendChild(dropdown);
      this.dropdowns.set(level, dropdown);
      section.appendChild(label);
      this.dialog.appendChild(section);
    }

    const builder = document.createElement("section");
    const heading = document.createElement("h3");
    heading.textContent = "Create new customization";
    builder.appendChild(heading);

    const levelLabel = document.createElement("label");
    levelLabel.textContent = "Level";
    this.builderLevel = document.createElement("select");
    for (const level of LEVELS) {
      const option = document.createElement("option");
      option.value = level;
      option.textContent = level;
      this.builderLevel.appendChild(option);
    }
    this.builderLevel.addEventListener("change", () => this.rebuildBuilderRows());
    levelLabel.appendChild(this.builderLevel);
    builder.appendChild(levelLabel);

    this.builderRows = document.createElement("ul");
    this.builderRows.setAttribute("aria-label",
      "tokens; Alt+ArrowUp and Alt+ArrowDown reorder");
    builder.appendChild(this.builderRows);

    const nameLabel = document.createElement("label");
    nameLabel.textContent = "Custom preset name";
    this.builderName = document.createElement("input");
    this.builderName.type = "text";
    nameLabel.appendChild(this.builderName);
    builder.appendChild(nameLabel);

    this.builderError = document.createElement("p");
    this.builderError.setAttribute("role", "alert");
    this.builderError.className = "builder-error";
    builder.appendChild(this.builderError);

    const save = document.createElement("button");
    save.type = "button";
    save.textContent = "Save";
    save.addEventListener("click", () => void this.saveCustomPreset());
    builder.appendChild(save);
    this.dialog.appendChild(builder);
  }

  async open(): Promise<void> {
    this.restoreTarget = document.activeElement as HTMLElement | null;
    await this.reload();
    this.dialog.hidden = false;
    this.firstTabbable().focus();
  }

  close(): void {
    this.dialog.hidden = true;
    this.builderError.textContent = "";
    this.restoreTarget?.focus();
  }

  private async reload(): Promise<void> {
    const settings = await this.client.getSettings();
    this.tokensByLevel = settings.tokens;
    for (const level of LEVELS) {
      this.refreshSection(level, settings);
    }
    this.rebuildBuilderRows();
  }

  /** The dropdown label always names the active customization's contents. */
  private refreshSection(level: string, settings: SettingsResponse): void {
    const dropdown = this.dropdowns.get(level)!;
    const active = settings.settings.active[level];
    dropdown.textContent = "";
    for (const name of settings.presets[level]) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      option.selected = name === active;
      dropdown.appendChild(option);
    }
    const included = settings.active_entries[level]
      .filter((e) => e.setting !== "off")
      .map((e) => `${e.kind} (${e.setting})`);
    this.descriptions.get(level)!.textContent =
      included.length > 0 ? included.join(", ") : "all tokens off";
  }

  private async applyPreset(level: string, name: string): Promise<void> {
    const resp = await this.client.setPreset(level, name);
    this.announcer.announce(resp.announcement.text);
    await this.reload();
    await this.onSettingsChanged();
  }

  private rebuildBuilderRows(): void {
    const level = this.builderLevel.value;
    this.builderRows.textContent = "";
    for (const kind of this.tokensByLevel[level] ?? []) {
      this.builderRows.appendChild(this.builderRow(kind));
    }
  }

  private builderRow(kind: string): HTMLLIElement {
    const row = document.createElement("li");
    row.dataset.kind = kind;
    const label = document.createElement("label");
    label.textContent = kind;
    const select = document.createElement("select");
    for (const value of ["off", "short", "long"]) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      select.appendChild(option);
    }
    select.addEventListener("keydown", (e) => {
      if (!e.altKey || (e.key !== "ArrowUp" && e.key !== "ArrowDown")) return;
      e.preventDefault();
      this.moveRow(row, e.key === "ArrowUp" ? -1 : 1);
      select.focus();
    });
    label.appendChild(select);
    row.appendChild(label);
    return row;
  }

  private moveRow(row: HTMLLIElement, delta: number): void {
    const rows = Array.from(this.builderRows.children);
    const index = rows.indexOf(row);
    const target = index + delta;
    if (target < 0 || target >= rows.length) return;
    if (delta < 0) {
      this.builderRows.insertBefore(row, rows[target]);
    } else {
      this.builderRows.insertBefore(rows[target], row);
    }
  }

  private builderEntries(): TokenEntry[] {
    return Array.from(this.builderRows.children).map((row) => ({
      kind: (row as HTMLElement).dataset.kind!,
      setting: (row.querySelector("select") as HTMLSelectElement).value,
    }));
  }

  private async saveCustomPreset(): Promise<void> {
    this.builderError.textContent = "";
    try {
      const name = this.builderName.value;
      const level = this.builderLevel.value;
      const resp = await this.client.createPreset(name, level, this.builderEntries());
      this.announcer.announce(resp.announcement.text);
      await this.reload();
      await this.onSettingsChanged();
    } catch (err) {
      this.builderError.textContent = (err as Error).message;
    }
  }

  tabbables(): HTMLElement[] {
    return Array.from(this.dialog.querySelectorAll<HTMLElement>(
      "button, select, input, [tabindex]:not([tabindex='-1'])",
    )).filter((el) => !el.hidden);
  }

  private firstTabbable(): HTMLElement {
    return this.tabbables()[0];
  }

  /** Bounded space: Tab cycles inside the dialog; Escape leaves it. */
  private onDialogKeydown(event: KeyboardEvent): void {
    if (event.key === "Escape") {
      event.preventDefault();
      this.close();
      return;
    }
    if (event.key !== "Tab") return;
    const tabbables = this.tabbables();
    const first = tabbables[0];
    const last = tabbables[tabbables.length - 1];
    const current = document.activeElement;
    if (event.shiftKey && current === first) {
      event.preventDefault();
      last.focus();
    } else if (!event.shiftKey && current === last) {
      event.preventDefault();
      first.focus();
    }
  }
}
