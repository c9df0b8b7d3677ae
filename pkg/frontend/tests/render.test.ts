/** DOM behaviour: tabs, suggestion dropdown, popovers, search mask. */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import type { Envelope, NodeConfig } from "../src/types.js";
import { SECTION_TABS } from "../src/types.js";
import { entryCard, localPanel, remotePanel } from "../src/results.js";
import { attachSuggestions, DEBOUNCE_MS } from "../src/suggest.js";
import { PopoverController } from "../src/popover.js";
import { SearchForm } from "../src/search-form.js";
import { peerResultsUrl } from "../src/api.js";

import configFixture from "./fixtures/config.json";
import localPlanet from "./fixtures/local_planet.json";
import sqfRosetta from "./fixtures/sqf_rosetta.json";
import sqfMissing from "./fixtures/sqf_missing.json";
import remotePlanet from "./fixtures/remote_planet.json";

const PARAMS = { type: "LQF", domain: "Resource", values: ["planet"] } as const;

function envelope(fixture: unknown): Envelope {
  return fixture as Envelope;
}

describe("result cards", () => {
  it("every card exposes the eight thematic tabs", () => {
    const card = entryCard(envelope(localPlanet).results!.entries[0]);
    const labels = [...card.querySelectorAll(".tab")].map((t) => t.textContent);
    expect(labels).toEqual([...SECTION_TABS]);
  });

  it("clicking a tab switches the visible panel", () => {
    const card = entryCard(envelope(localPlanet).results!.entries[0]);
    document.body.append(card);
    const panels = card.querySelectorAll<HTMLElement>(".tab-panel");
    expect(panels[0].hidden).toBe(false);
    const resourceInfoTab = [...card.querySelectorAll<HTMLElement>(".tab")]
      .find((t) => t.textContent === "Resource Info")!;
    resourceInfoTab.click();
    expect(panels[0].hidden).toBe(true);
    const visible = [...panels].filter((p) => !p.hidden);
    expect(visible).toHaveLength(1);
    expect(visible[0].dataset.section).toBe("Resource Info");
    card.remove();
  });

  it("zero hits renders an explicit empty state", () => {
    const panel = localPanel({ query: PARAMS, results: { count: 0, entries: [] } });
    expect(panel.querySelector(".local-count")!.textContent).toBe("0 results");
    expect(panel.querySelector(".empty-state")).not.toBeNull();
  });

  it("drill-down buttons appear exactly on ref-carrying fields", () => {
    const osiris = envelope(localPlanet).results!.entries[0];
    const card = entryCard(osiris);
    const refs = (osiris.sections ?? [])
      .flatMap((s) => s.fields).filter((f) => f.ref).length;
    expect(card.querySelectorAll(".sqf-button")).toHaveLength(refs);
    expect(refs).toBeGreaterThan(0);
  });
});

describe("remote panel", () => {
  it("positive counts are links to the peer's results page", () => {
    const panel = remotePanel(envelope(remotePlanet), PARAMS, "Query Node");
    const sbd = panel.querySelector('[data-node="SBD Node"]')!;
    const link = sbd.querySelector<HTMLAnchorElement>(".count-link")!;
    expect(link.textContent).toBe("7 results");
    const nodeUrl = envelope(remotePlanet).remote!.nodes
      .find((n) => n.name === "SBD Node")!.url;
    expect(link.getAttribute("href")).toBe(peerResultsUrl(nodeUrl, PARAMS));
  });

  it("zero counts are plain text with a homepage link", () => {
    const panel = remotePanel(envelope(remotePlanet), PARAMS, "Query Node");
    const atmospheres = panel.querySelector('[data-node="Atmospheres Node"]')!;
    expect(atmospheres.querySelector(".count-zero")!.textContent).toBe("0 results");
    expect(atmospheres.querySelector(".count-link")).toBeNull();
    expect(atmospheres.querySelector(".homepage-link")).not.toBeNull();
  });

  it("the local node closes the panel with its own comparison count", () => {
    const panel = remotePanel(envelope(remotePlanet), PARAMS, "Query Node");
    const sections = panel.querySelectorAll(".remote-node");
    const last = sections[sections.length - 1];
    expect(last.classList.contains("local-node")).toBe(true);
    expect(last.querySelector("h3")!.textContent).toBe("Results from Query Node");
    expect(last.textContent).toContain("0 results");
  });

  it("missing remote envelope degrades to a notice", () => {
    const panel = remotePanel(null, PARAMS, "Query Node");
    expect(panel.querySelector(".remote-unavailable")).not.toBeNull();
  });
});

describe("suggestion dropdown", () => {
  let input: HTMLInputElement;

  beforeEach(() => {
    vi.useFakeTimers();
    input = document.createElement("input");
    document.body.append(input);
  });

  afterEach(() => {
    vi.useRealTimers();
    input.remove();
  });

  function type(text: string): void {
    input.value = text;
    input.dispatchEvent(new Event("input"));
  }

  it("debounces and shows only endpoint-returned words", async () => {
    const calls: string[] = [];
    const box = attachSuggestions(input, async (fragment) => {
      calls.push(fragment);
      return { suggestions: ["planetary", "planets"] };
    });
    type("p");
    type("pl");
    type("plan");
    expect(calls).toEqual([]); // nothing before the debounce window
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS + 10);
    expect(calls).toEqual(["plan"]); // earlier keystrokes superseded
    const items = [...box.element.querySelectorAll(".suggestion")]
      .map((li) => li.textContent);
    expect(items).toEqual(["planetary", "planets"]);
    expect(box.element.hidden).toBe(false);
    box.dispose();
  });

  it("aborts the in-flight request when superseded", async () => {
    const aborted: string[] = [];
    const box = attachSuggestions(input, (fragment, signal) =>
      new Promise((resolve) => {
        signal.addEventListener("abort", () => aborted.push(fragment));
        setTimeout(() => resolve({ suggestions: [fragment] }), 5000);
      }));
    type("pla");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS + 10);
    type("plane");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS + 10);
    expect(aborted).toEqual(["pla"]);
    box.dispose();
  });

  it("clearing the box hides the dropdown", async () => {
    const box = attachSuggestions(input, async () => ({ suggestions: ["word"] }));
    type("wo");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS + 10);
    expect(box.element.hidden).toBe(false);
    type("");
    expect(box.element.hidden).toBe(true);
    box.dispose();
  });

  it("endpoint failure hides the dropdown instead of breaking", async () => {
    const box = attachSuggestions(input, async () => {
      throw new Error("boom");
    });
    type("pla");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS + 10);
    expect(box.element.hidden).toBe(true);
    box.dispose();
  });

  it("no dropdown when nothing matches", async () => {
    const box = attachSuggestions(input, async () => ({ suggestions: [] }));
    type("zzz");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS + 10);
    expect(box.element.hidden).toBe(true);
    box.dispose();
  });

  it("picking a suggestion fills the box", async () => {
    const picked: string[] = [];
    const box = attachSuggestions(input, async () => ({
      suggestions: ["planetary"],
    }), (word) => picked.push(word));
    type("plan");
    await vi.advanceTimersByTimeAsync(DEBOUNCE_MS + 10);
    box.element.querySelector<HTMLElement>(".suggestion")!
      .dispatchEvent(new MouseEvent("mousedown"));
    expect(input.value).toBe("planetary");
    expect(picked).toEqual(["planetary"]);
    box.dispose();
  });
});

describe("drill-down popovers", () => {
  let root: HTMLElement;

  beforeEach(() => {
    root = document.createElement("div");
    document.body.append(root);
  });

  afterEach(() => {
    root.remove();
  });

  function buttonFor(ref: string): HTMLElement {
    const button = document.createElement("button");
    button.className = "sqf-button";
    button.dataset.ref = ref;
    root.append(button);
    return button;
  }

  it("click opens a popover populated from the SQF answer", async () => {
    new PopoverController(async () => envelope(sqfRosetta)).attach(root);
    buttonFor("Keyword:K1").click();
    await vi.waitFor(() => {
      expect(root.querySelector(".popover-body h4")?.textContent)
        .toBe("Rosetta");
    });
  });

  it("dangling reference reports no linked record", async () => {
    new PopoverController(async () => envelope(sqfMissing)).attach(root);
    buttonFor("Resource:R404").click();
    await vi.waitFor(() => {
      expect(root.querySelector(".popover-empty")?.textContent)
        .toBe("no linked record");
    });
  });

  it("opening a second popover closes the first", async () => {
    new PopoverController(async () => envelope(sqfRosetta)).attach(root);
    const first = buttonFor("Keyword:K1");
    const second = buttonFor("Keyword:K1");
    first.click();
    await vi.waitFor(() =>
      expect(root.querySelectorAll(".sqf-popover")).toHaveLength(1));
    second.click();
    await vi.waitFor(() => {
      const popovers = root.querySelectorAll(".sqf-popover");
      expect(popovers).toHaveLength(1);
      expect(popovers[0].previousElementSibling).toBe(second);
    });
  });

  it("the close button dismisses the popover", async () => {
    new PopoverController(async () => envelope(sqfRosetta)).attach(root);
    buttonFor("Keyword:K1").click();
    await vi.waitFor(() =>
      expect(root.querySelector(".sqf-popover")).not.toBeNull());
    root.querySelector<HTMLElement>(".popover-close")!.click();
    expect(root.querySelector(".sqf-popover")).toBeNull();
  });
});

describe("bootstrap", () => {
  it("config fetch failure shows an inline error banner", async () => {
    const { boot } = await import("../src/main.js");
    const { ApiClient } = await import("../src/api.js");
    const root = document.createElement("div");
    const failing = new ApiClient("http://127.0.0.1:1");
    await boot(root, failing);
    const banner = root.querySelector(".error-banner");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toContain("configuration");
  });
});

describe("search mask", () => {
  const config = configFixture as NodeConfig;

  function build(onSearch = (_: unknown) => {}) {
    return new SearchForm(config, {
      onSearch,
      suggestFetcher: () => async () => ({ suggestions: [] }),
    });
  }

  it("general information section offers a text box, never lists", () => {
    const form = build();
    expect(form.activeSection).toBe("General Information");
    const domains = [...form.element.querySelectorAll("option")]
      .map((o) => o.textContent);
    expect(domains).toContain("Country");
    expect(domains).not.toContain("Person");
    expect(form.element.querySelector(".value-input")).not.toBeNull();
    expect(form.element.querySelector(".value-select")).toBeNull();
  });

  it("EPN resources splits general and planetary domains", () => {
    const form = build();
    form.setSection("EPN Resources");
    const groups = [...form.element.querySelectorAll("optgroup")]
      .map((g) => g.label);
    expect(groups).toEqual(["General search domains", "Planetary science domains"]);
  });

  it("predefined domain shows exactly the configured value list", () => {
    const form = build();
    form.setSection("EPN Resources");
    form.selectDomain("mission");
    const select = form.element.querySelector<HTMLSelectElement>(".value-select")!;
    const values = [...select.options].map((o) => o.value);
    expect(values).toEqual(config.sections.epn_resources.predefined.mission);
    expect(form.element.querySelector(".value-input")).toBeNull();
  });

  it("submitting a text search splits values on whitespace", () => {
    const searches: unknown[] = [];
    const form = build((p) => searches.push(p));
    document.body.append(form.element);
    form.setSection("EPN Resources");
    form.selectDomain("Resource");
    const input = form.element.querySelector<HTMLInputElement>(".value-input")!;
    input.value = "  planet archive ";
    form.element.querySelector("form")!
      .dispatchEvent(new Event("submit", { cancelable: true }));
    expect(searches).toEqual([
      { type: "LQF", domain: "Resource", values: ["planet", "archive"] },
    ]);
    form.element.remove();
  });

  it("blank text submits nothing", () => {
    const searches: unknown[] = [];
    const form = build((p) => searches.push(p));
    document.body.append(form.element);
    form.element.querySelector("form")!
      .dispatchEvent(new Event("submit", { cancelable: true }));
    expect(searches).toEqual([]);
    form.element.remove();
  });
});
