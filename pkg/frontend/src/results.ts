/**
 * Results page: local result cards on the left, remote counts on the right.
 *
 * Each local card is topped by a title bar (name, brief description, URL)
 * with the remaining information behind the eight thematic tabs. The
 * remote panel lists one section per peer: its count (rendered as a link
 * to the peer's own results page when greater than zero), a homepage
 * link, and a distinct unreachable badge when the peer failed; the local
 * count is shown alongside for comparison.
 */

import type { SearchParams } from "./api.js";
import { encodeQuery, peerResultsUrl } from "./api.js";
import type { EntryJson, Envelope, FieldJson, SectionJson } from "./types.js";
import { SECTION_TABS } from "./types.js";
import { clear, el } from "./dom.js";

export function queryTitle(envelope: Envelope): string {
  const echo = envelope.query;
  if (!echo) return "Search results";
  const values = echo.id !== undefined ? echo.id : (echo.values ?? []).join(", ");
  return `Results for '${values}' (${echo.domain})`;
}

function fieldRow(field: FieldJson): HTMLElement {
  const row = el("div", { class: "field-row" },
    el("span", { class: "field-name" }, field.name),
    el("span", { class: "field-value" }, field.value));
  if (field.ref) {
    row.append(el("button", {
      class: "sqf-button",
      type: "button",
      title: `Look up ${field.value}`,
      "data-ref": field.ref,
    }, "?"));
  }
  return row;
}

function sectionPanel(section: SectionJson): HTMLElement {
  return el("div", { class: "tab-panel", "data-section": section.name },
    ...section.fields.map(fieldRow));
}

export function entryCard(entry: EntryJson): HTMLElement {
  const title = el("div", { class: "card-title" },
    el("h3", {}, entry.name ?? entry.id));
  if (entry.short_description) {
    title.append(el("p", { class: "brief" }, `(${entry.short_description})`));
  }
  if (entry.url) {
    title.append(el("a", { href: entry.url, class: "card-url", target: "_blank" },
      entry.url));
  }

  const card = el("article", { class: "card", "data-entry": `${entry.collection}:${entry.id}` },
    title);
  if (entry.long_description) {
    card.append(el("p", { class: "long-description" }, entry.long_description));
  }

  const sections = new Map((entry.sections ?? []).map((s) => [s.name, s]));
  const tabBar = el("div", { class: "tab-bar", role: "tablist" });
  const panels = el("div", { class: "tab-panels" });
  SECTION_TABS.forEach((tabName, index) => {
    const section = sections.get(tabName) ?? { name: tabName, fields: [] };
    const panel = sectionPanel(section);
    panel.hidden = index !== 0;
    const tab = el("button", {
      class: index === 0 ? "tab active" : "tab",
      type: "button",
      role: "tab",
      "data-tab": tabName,
    }, tabName);
    tab.addEventListener("click", () => {
      tabBar.querySelectorAll(".tab").forEach((t) => t.classList.remove("active"));
      tab.classList.add("active");
      panels.querySelectorAll<HTMLElement>(".tab-panel").forEach((p) => {
        p.hidden = p.dataset.section !== tabName;
      });
    });
    tabBar.append(tab);
    panels.append(panel);
  });
  card.append(tabBar, panels);
  return card;
}

export function localPanel(envelope: Envelope): HTMLElement {
  const results = envelope.results;
  const panel = el("section", { class: "local-results" });
  const count = results?.count ?? 0;
  panel.append(el("h2", { class: "local-count" }, `${count} results`));
  if (!results || results.count === 0) {
    panel.append(el("p", { class: "empty-state" },
      "No resources at this node match the query."));
    return panel;
  }
  for (const entry of results.entries) {
    panel.append(entryCard(entry));
  }
  return panel;
}

function nodeSection(name: string, countNode: Node,
                     homepage: { href: string; label: string }): HTMLElement {
  return el("div", { class: "remote-node", "data-node": name },
    el("h3", {}, `Results from ${name}`),
    countNode,
    el("a", { class: "homepage-link", href: homepage.href }, homepage.label));
}

export function remotePanel(envelope: Envelope | null, params: SearchParams,
                            selfName: string): HTMLElement {
  const panel = el("aside", { class: "remote-results" },
    el("h2", {}, "Search results on other nodes"));
  const remote = envelope?.remote;
  if (!remote) {
    panel.append(el("p", { class: "remote-unavailable" },
      "Remote results unavailable."));
    return panel;
  }
  for (const node of remote.nodes) {
    let count: Node;
    if (node.error !== undefined) {
      count = el("span", { class: "badge unreachable", title: node.error },
        "unreachable");
    } else if ((node.count ?? 0) > 0) {
      count = el("a", { class: "count-link", href: peerResultsUrl(node.url, params) },
        `${node.count} results`);
    } else {
      count = el("span", { class: "count-zero" }, "0 results");
    }
    panel.append(nodeSection(node.name, count,
      { href: node.url, label: `open '${node.name}' web site` }));
  }
  // The local node's own count closes the panel, for comparison; when
  // non-zero it deep-links back to this page's results.
  const localCount: Node = remote.local > 0
    ? el("a", { class: "count-link", href: `?${encodeQuery(params)}` },
        `${remote.local} results`)
    : el("span", { class: "count-zero" }, "0 results");
  const local = nodeSection(selfName, localCount,
    { href: ".", label: `open '${selfName}' web site` });
  local.classList.add("local-node");
  panel.append(local);
  return panel;
}

export function renderResults(container: HTMLElement, local: Envelope,
                              remote: Envelope | null, params: SearchParams,
                              selfName: string): void {
  clear(container);
  container.append(
    el("h1", { class: "results-title" }, queryTitle(local)),
    el("div", { class: "results-layout" },
      localPanel(local),
      remotePanel(remote, params, selfName)));
}

export function renderError(container: HTMLElement, message: string): void {
  clear(container);
  container.append(el("div", { class: "error-banner", role: "alert" }, message));
}
