/**
 * Application bootstrap: load the node config, mount the search mask,
 * run searches (local results plus remote fan-out), and wire drill-down
 * popovers. A query string on the page URL deep-links straight into a
 * search, which is how count links between nodes land.
 */

import { ApiClient, type SearchParams } from "./api.js";
import { PopoverController } from "./popover.js";
import { renderError, renderResults } from "./results.js";
import { SearchForm } from "./search-form.js";
import { el } from "./dom.js";

export async function boot(root: HTMLElement, api: ApiClient): Promise<void> {
  const resultsArea = el("main", { class: "results-area" });

  let config;
  try {
    config = await api.config();
  } catch {
    root.append(el("div", { class: "error-banner", role: "alert" },
      "Cannot load the search configuration from this node."));
    return;
  }

  const runSearch = async (params: SearchParams): Promise<void> => {
    let local;
    try {
      local = await api.query(params);
    } catch {
      renderError(resultsArea, "The node did not answer the query.");
      return;
    }
    if (local.error) {
      renderError(resultsArea, `${local.error.code}: ${local.error.message}`);
      return;
    }
    let remote = null;
    try {
      remote = await api.remote(params);
    } catch {
      remote = null; // remote panel degrades, local results still show
    }
    renderResults(resultsArea, local, remote, params, config.node);
  };

  const form = new SearchForm(config, {
    onSearch: (params) => void runSearch(params),
    suggestFetcher: (domain) => (fragment, signal) =>
      api.suggest(domain, fragment, signal),
  });

  const header = el("header", { class: "page-header" },
    el("h1", {}, `${config.node} search`),
    el("a", { class: "help-link", href: "help/" }, "On-line help"));

  root.append(header, form.element, resultsArea);

  new PopoverController((ref) => api.drillDown(ref)).attach(root);

  const params = deepLinkParams(window.location.search);
  if (params) {
    if (Object.keys(config.sections.epn_resources.predefined)
        .includes(params.domain) || ["Person", "Resource"].includes(params.domain)) {
      form.setSection("EPN Resources");
    }
    form.selectDomain(params.domain);
    await runSearch(params);
  }
}

export function deepLinkParams(search: string): SearchParams | null {
  const pairs = new URLSearchParams(search);
  const domain = pairs.get("domain");
  if (!domain) return null;
  const values = pairs.getAll("value");
  if (values.length === 0) return null;
  return { type: "LQF", domain, values };
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void boot(document.getElementById("app")!, new ApiClient(""));
}
