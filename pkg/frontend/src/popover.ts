/**
 * Drill-down popovers behind the question-mark buttons on card fields.
 *
 * Clicking a button fires an SQF request for the field's linked entry and
 * shows the answer in a small window next to the button. At most one
 * popover is open at a time; clicking elsewhere or on the close button
 * dismisses it.
 */

import type { Envelope } from "./types.js";
import { clear, el } from "./dom.js";

export type DrillDownFetcher = (ref: string) => Promise<Envelope>;

export class PopoverController {
  private current: HTMLElement | null = null;

  constructor(private readonly fetcher: DrillDownFetcher) {}

  /** Handle ? clicks for every current and future button under `root`. */
  attach(root: HTMLElement): void {
    root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement | null;
      const button = target?.closest<HTMLElement>(".sqf-button");
      if (button?.dataset.ref) {
        event.stopPropagation();
        void this.open(button, button.dataset.ref);
        return;
      }
      if (this.current && !this.current.contains(target as Node)) {
        this.close();
      }
    });
  }

  close(): void {
    this.current?.remove();
    this.current = null;
  }

  async open(anchor: HTMLElement, ref: string): Promise<void> {
    this.close();
    const popover = el("div", { class: "sqf-popover", role: "dialog", "data-ref": ref });
    this.fill(popover, el("p", { class: "popover-loading" }, "Looking up…"));
    anchor.insertAdjacentElement("afterend", popover);
    this.current = popover;

    let entry;
    try {
      entry = (await this.fetcher(ref)).results?.entries[0];
    } catch {
      entry = undefined;
    }
    if (this.current !== popover) {
      return; // superseded by a newer popover
    }
    if (!entry) {
      this.fill(popover, el("p", { class: "popover-empty" }, "no linked record"));
      return;
    }
    const body = el("div", { class: "popover-body" }, el("h4", {}, entry.name ?? entry.id));
    const rows = el("dl", {});
    for (const field of entry.fields ?? []) {
      rows.append(el("dt", {}, field.name), el("dd", {}, field.value));
    }
    for (const link of entry.links ?? []) {
      rows.append(el("dt", {}, "linked"), el("dd", {}, link));
    }
    body.append(rows);
    this.fill(popover, body);
  }

  private fill(popover: HTMLElement, content: HTMLElement): void {
    clear(popover);
    const close = el("button", { class: "popover-close", type: "button" }, "×");
    close.addEventListener("click", () => this.close());
    popover.append(close, content);
  }
}
