// Output pane: run state banner plus printed lines in arrival order.

import type { RunState } from "./types.js";

export class ConsolePane {
  constructor(
    private readonly lines: HTMLElement,
    private readonly banner: HTMLElement,
  ) {}

  clear(): void {
    this.lines.textContent = "";
    this.setState("idle");
  }

  print(text: string, cssClass = "console-line"): void {
    const line = document.createElement("div");
    line.className = cssClass;
    line.textContent = text;
    this.lines.appendChild(line);
    this.lines.scrollTop = this.lines.scrollHeight;
  }

  note(text: string): void {
    this.print(text, "console-note");
  }

  error(text: string): void {
    this.print(text, "console-error");
  }

  setState(state: RunState, detail = ""): void {
    this.banner.dataset.state = state;
    this.banner.textContent = detail ? `${state}: ${detail}` : state;
  }
}
