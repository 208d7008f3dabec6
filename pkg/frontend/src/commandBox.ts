/**
 * Command combobox: a fixed menu of speak / focus / clear / preset-shortcut
 * commands. Typing jumps the selection to the first option starting with
 * the typed prefix; Enter executes against the current cursor node. Speak
 * results (and errors like inapplicable tokens) are voiced through the
 * live region, and the box stays open for the next command.
 */

import { Announcer } from "./announcer.js";
import { SessionClient } from "./protocol.js";

const SPEAK_TOKENS = [
  "name", "index", "values", "type", "size", "children",
  "aggregate", "parent", "depth", "quantile",
];
const LEVELS = ["facet", "axis", "section", "datapoint"];

export class CommandBox {
  readonly input: HTMLInputElement;
  readonly listbox: HTMLUListElement;
  private options: string[] = [];
  private activeIndex = 0;

  constructor(
    container: HTMLElement,
    private readonly client: SessionClient,
    private readonly announcer: Announcer,
    private readonly onCommandExecuted: () => Promise<void>,
  ) {
    const label = document.createElement("label");
    label.textContent = "Choose command";
    this.input = document.createElement("input");
    this.input.type = "text";
    this.input.setAttribute("role", "combobox");
    this.input.setAttribute("aria-expanded", "true");
    this.input.setAttribute("aria-autocomplete", "list");
    this.input.setAttribute("aria-controls", "command-options");
    label.appendChild(this.input);
    container.appendChild(label);

    this.listbox = document.createElement("ul");
    this.listbox.id = "command-options";
    this.listbox.setAttribute("role", "listbox");
    container.appendChild(this.listbox);

    this.input.addEventListener("input", () => this.onTypeAhead());
    this.input.addEventListener("keydown", (e) => this.onKeydown(e));
    this.setOptions(this.defaultOptions([]));
  }

  /** Fixed command menu; preset shortcuts include any custom presets. */
  defaultOptions(customs: { level: string; name: string }[]): string[] {
    const speak = [...SPEAK_TOKENS];
    const focus = SPEAK_TOKENS.map((t) => `focus ${t}`);
    const presets: string[] = [];
    for (const level of LEVELS) {
      for (const name of ["high", "medium", "low"]) {
        presets.push(`preset ${level} ${name}`);
      }
    }
    for (const custom of customs) {
      presets.push(`preset ${custom.level} ${custom.name}`);
    }
    return [...speak, ...focus, "clear", ...presets];
  }

  setOptions(options: string[]): void {
    this.options = options;
    this.listbox.textContent = "";
    options.forEach((text, i) => {
      const li = document.createElement("li");
      li.setAttribute("role", "option");
      li.id = `command-option-${i}`;
      li.textContent = text;
      this.listbox.appendChild(li);
    });
    this.setActive(0);
  }

  get activeOption(): string {
    return this.options[this.activeIndex];
  }

  private setActive(index: number): void {
    this.activeIndex = index;
    this.input.setAttribute("aria-activedescendant", `command-option-${index}`);
    this.listbox.querySelectorAll("[role=option]").forEach((el, i) => {
      el.setAttribute("aria-selected", i === index ? "true" : "false");
    });
  }

  /** Jump to the first option whose text starts with the typed prefix. */
  private onTypeAhead(): void {
    const prefix = this.input.value.toLowerCase();
    if (!prefix) return;
    const index = this.options.findIndex((o) => o.toLowerCase().startsWith(prefix));
    if (index >= 0) this.setActive(index);
  }

  private onKeydown(event: KeyboardEvent): void {
    if (event.key === "ArrowDown") {
      event.preventDefault();
      this.setActive(Math.min(this.activeIndex + 1, this.options.length - 1));
    } else if (event.key === "ArrowUp") {
      event.preventDefault();
      this.setActive(Math.max(this.activeIndex - 1, 0));
    } else if (event.key === "Enter") {
      event.preventDefault();
      void this.execute(this.activeOption);
    }
  }

  async execute(option: string): Promise<void> {
    const command = SPEAK_TOKENS.includes(option) ? `speak ${option}` : option;
    try {
      const resp = await this.client.command(command);
      if (resp.announcement) {
        this.announcer.announce(resp.announcement.text);
      }
    } catch (err) {
      this.announcer.announce((err as Error).message);
    }
    this.input.value = "";
    await this.onCommandExecuted();
  }
}
