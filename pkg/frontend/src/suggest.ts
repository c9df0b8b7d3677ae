/**
 * As-you-type suggestion dropdown under a text box.
 *
 * Requests are debounced (150 ms) and an in-flight request is aborted when
 * a newer fragment supersedes it. The dropdown only ever shows words the
 * endpoint returned; on endpoint failure it hides and searching stays
 * possible - suggestions are advisory.
 */

import type { Envelope } from "./types.js";
import { clear, el } from "./dom.js";

export const DEBOUNCE_MS = 150;

export type SuggestFetcher = (fragment: string, signal: AbortSignal) => Promise<Envelope>;

export interface SuggestionBox {
  /** The dropdown element, kept next to the input by the caller's layout. */
  element: HTMLUListElement;
  dispose(): void;
}

export function attachSuggestions(
  input: HTMLInputElement,
  fetcher: SuggestFetcher,
  onPick?: (word: string) => void,
): SuggestionBox {
  const dropdown = el("ul", { class: "suggestions", hidden: "" });
  let timer: ReturnType<typeof setTimeout> | null = null;
  let controller: AbortController | null = null;

  function hide(): void {
    dropdown.hidden = true;
    clear(dropdown);
  }

  function show(words: string[]): void {
    clear(dropdown);
    if (words.length === 0) {
      dropdown.hidden = true;
      return;
    }
    for (const word of words) {
      const item = el("li", { class: "suggestion" }, word);
      item.addEventListener("mousedown", (event) => {
        event.preventDefault();
        input.value = word;
        hide();
        onPick?.(word);
      });
      dropdown.append(item);
    }
    dropdown.hidden = false;
  }

  async function lookUp(fragment: string): Promise<void> {
    controller?.abort();
    controller = new AbortController();
    try {
      const envelope = await fetcher(fragment, controller.signal);
      show(envelope.suggestions ?? []);
    } catch {
      hide(); // advisory only; never block the search itself
    }
  }

  function onInput(): void {
    if (timer !== null) clearTimeout(timer);
    const fragment = input.value.trim();
    if (!fragment) {
      controller?.abort();
      hide();
      return;
    }
    timer = setTimeout(() => void lookUp(fragment), DEBOUNCE_MS);
  }

  function onBlur(): void {
    hide();
  }

  input.addEventListener("input", onInput);
  input.addEventListener("blur", onBlur);
  return {
    element: dropdown,
    dispose() {
      if (timer !== null) clearTimeout(timer);
      controller?.abort();
      input.removeEventListener("input", onInput);
      input.removeEventListener("blur", onBlur);
      dropdown.remove();
    },
  };
}
