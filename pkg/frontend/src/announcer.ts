/**
 * Polite live region. Screen readers voice whatever lands here without
 * stealing focus; re-announcing identical text requires a clear-then-set.
 */
export class Announcer {
  readonly element: HTMLElement;

  constructor(container: HTMLElement) {
    this.element = document.createElement("div");
    this.element.setAttribute("aria-live", "polite");
    this.element.setAttribute("role", "status");
    this.element.className = "announcer";
    container.appendChild(this.element);
  }

  announce(text: string): void {
    this.element.textContent = "";
    this.element.textContent = text;
  }
}
