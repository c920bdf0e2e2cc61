/**
 * View state and its URL-hash encoding.
 *
 * The full navigation state lives in the hash so every view is
 * deep-linkable: `#/<person>`, `#/<person>/<role>`,
 * `#/<person>/<role>/<aspect>` with URI-encoded segments. A role is
 * only meaningful with a person, an aspect only with a role; decoding
 * enforces that by position.
 */

export interface ViewState {
  person: string | null;
  role: string | null;
  aspect: string | null;
}

export const EMPTY_STATE: ViewState = { person: null, role: null, aspect: null };

export function encodeHash(state: ViewState): string {
  const parts: string[] = [];
  if (state.person !== null) {
    parts.push(encodeURIComponent(state.person));
    if (state.role !== null) {
      parts.push(encodeURIComponent(state.role));
      if (state.aspect !== null) {
        parts.push(encodeURIComponent(state.aspect));
      }
    }
  }
  // "#/" (never "") so hash assignment stays a same-document navigation
  return "#/" + parts.join("/");
}

export function decodeHash(hash: string): ViewState {
  const trimmed = hash.replace(/^#\/?/, "");
  if (trimmed === "") {
    return { ...EMPTY_STATE };
  }
  const parts = trimmed.split("/").map((p) => decodeURIComponent(p));
  return {
    person: parts[0] || null,
    role: parts.length > 1 && parts[1] ? parts[1] : null,
    aspect: parts.length > 2 && parts[2] ? parts[2] : null,
  };
}

export function statesEqual(a: ViewState, b: ViewState): boolean {
  return a.person === b.person && a.role === b.role && a.aspect === b.aspect;
}
