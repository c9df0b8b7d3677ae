/**
 * Wire types for the node's JSON mirror (see docs/wire-protocol.md).
 * The UI consumes these endpoints and nothing else.
 */

export interface FieldJson {
  name: string;
  value: string;
  /** `Collection:id` drill-down handle, present when the value names a linked entry */
  ref?: string;
}

export interface SectionJson {
  name: string;
  fields: FieldJson[];
}

export interface EntryJson {
  collection: string;
  id: string;
  name?: string;
  short_description?: string;
  long_description?: string;
  url?: string;
  sections?: SectionJson[];
  fields?: FieldJson[];
  links?: string[];
}

export interface QueryEcho {
  type: string;
  domain: string;
  values?: string[];
  id?: string;
}

export interface ResultsBody {
  count: number;
  entries: EntryJson[];
}

export interface RemoteNodeJson {
  name: string;
  url: string;
  count?: number;
  error?: string;
}

export interface RemoteBody {
  local: number;
  nodes: RemoteNodeJson[];
}

export interface ErrorBody {
  code: string;
  message: string;
}

/** Every answer carries the query echo plus exactly one body member. */
export interface Envelope {
  query?: QueryEcho;
  results?: ResultsBody;
  count?: number;
  suggestions?: string[];
  remote?: RemoteBody;
  error?: ErrorBody;
}

export interface NodeConfig {
  node: string;
  sections: {
    general_information: string[];
    epn_resources: {
      general: string[];
      predefined: Record<string, string[]>;
    };
  };
  peers: { name: string; url: string }[];
}

/** The eight result-card tabs, in display order. */
export const SECTION_TABS = [
  "General Info",
  "Resource Info",
  "Responsibilities",
  "Related Persons",
  "URLs",
  "Restrictions",
  "Biblio Ref.",
  "Related Staff",
] as const;
