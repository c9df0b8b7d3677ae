/**
 * The two-section search mask.
 *
 * "General Information" offers the flat collections as free-text domains.
 * "EPN Resources" splits into general domains (Person, Resource - free
 * text with suggestions) and planetary-science domains, each carrying its
 * configured list of predefined values instead of a text box.
 */

import type { SearchParams } from "./api.js";
import type { NodeConfig } from "./types.js";
import { clear, el } from "./dom.js";
import type { SuggestFetcher } from "./suggest.js";
import { attachSuggestions } from "./suggest.js";

export type SectionName = "General Information" | "EPN Resources";

export interface SearchFormHandlers {
  onSearch(params: SearchParams): void;
  suggestFetcher(domain: string): SuggestFetcher;
}

interface DomainOption {
  domain: string;
  group: string;
  predefined?: string[];
}

function domainOptions(config: NodeConfig, section: SectionName): DomainOption[] {
  if (section === "General Information") {
    return config.sections.general_information.map((domain) => ({
      domain, group: "General domains",
    }));
  }
  const general = config.sections.epn_resources.general.map((domain) => ({
    domain, group: "General search domains",
  }));
  const planetary = Object.entries(config.sections.epn_resources.predefined)
    .map(([domain, values]) => ({
      domain, group: "Planetary science domains", predefined: values,
    }));
  return [...general, ...planetary];
}

export class SearchForm {
  readonly element: HTMLElement;
  private section: SectionName = "General Information";
  private readonly domainSelect: HTMLSelectElement;
  private readonly valueArea: HTMLElement;
  private options: DomainOption[] = [];
  private textInput: HTMLInputElement | null = null;
  private valueSelect: HTMLSelectElement | null = null;
  private disposeSuggestions: (() => void) | null = null;

  constructor(private readonly config: NodeConfig,
              private readonly handlers: SearchFormHandlers) {
    this.domainSelect = el("select", { class: "domain-select", name: "domain" });
    this.valueArea = el("div", { class: "value-area" });

    const tabs = el("div", { class: "section-tabs", role: "tablist" });
    (["General Information", "EPN Resources"] as const).forEach((name, index) => {
      const tab = el("button", {
        class: index === 0 ? "section-tab active" : "section-tab",
        type: "button",
        "data-section": name,
      }, name);
      tab.addEventListener("click", () => {
        tabs.querySelectorAll(".section-tab")
          .forEach((t) => t.classList.remove("active"));
        tab.classList.add("active");
        this.setSection(name);
      });
      tabs.append(tab);
    });

    const form = el("form", { class: "search-form" },
      tabs,
      el("label", { class: "domain-label" }, "Search domain: ", this.domainSelect),
      this.valueArea,
      el("button", { class: "search-button", type: "submit" }, "Search"));
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.submit();
    });
    this.domainSelect.addEventListener("change", () => this.renderValueArea());

    this.element = el("section", { class: "search-mask" }, form);
    this.setSection("General Information");
  }

  get activeSection(): SectionName {
    return this.section;
  }

  setSection(name: SectionName): void {
    this.section = name;
    this.options = domainOptions(this.config, name);
    clear(this.domainSelect);
    let currentGroup: HTMLOptGroupElement | null = null;
    for (const option of this.options) {
      if (currentGroup === null || currentGroup.label !== option.group) {
        currentGroup = el("optgroup", { label: option.group });
        this.domainSelect.append(currentGroup);
      }
      currentGroup.append(el("option", { value: option.domain }, option.domain));
    }
    this.renderValueArea();
  }

  selectDomain(domain: string): void {
    this.domainSelect.value = domain;
    this.renderValueArea();
  }

  private selectedOption(): DomainOption | undefined {
    return this.options.find((o) => o.domain === this.domainSelect.value);
  }

  private renderValueArea(): void {
    this.disposeSuggestions?.();
    this.disposeSuggestions = null;
    this.textInput = null;
    this.valueSelect = null;
    clear(this.valueArea);

    const option = this.selectedOption();
    if (!option) return;
    if (option.predefined) {
      this.valueSelect = el("select", { class: "value-select", name: "value" });
      for (const value of option.predefined) {
        this.valueSelect.append(el("option", { value }, value));
      }
      this.valueArea.append(
        el("label", {}, "Select a value: ", this.valueSelect));
      return;
    }
    this.textInput = el("input", {
      class: "value-input",
      name: "value",
      type: "text",
      placeholder: "Enter one or more values",
      autocomplete: "off",
    });
    const box = attachSuggestions(
      this.textInput,
      this.handlers.suggestFetcher(option.domain),
      () => this.submit());
    this.disposeSuggestions = () => box.dispose();
    this.valueArea.append(this.textInput, box.element);
  }

  /** Values are whitespace-separated words from the text box. */
  private submit(): void {
    const option = this.selectedOption();
    if (!option) return;
    if (option.predefined && this.valueSelect) {
      this.handlers.onSearch({
        type: "LQF", domain: option.domain, values: [this.valueSelect.value],
      });
      return;
    }
    const raw = this.textInput?.value.trim() ?? "";
    if (!raw) return;
    this.handlers.onSearch({
      type: "LQF", domain: option.domain, values: raw.split(/\s+/),
    });
  }
}
