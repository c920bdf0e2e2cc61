/**
 * DOM builders for every panel. All content comes verbatim from API
 * payloads (set through textContent, never innerHTML); the UI adds
 * chrome, not text of its own about the corpus.
 */

import type { AspectRow, AspectView, PersonDetail, PersonRow, SnippetCard } from "./types.js";

export function clear(container: HTMLElement): void {
  while (container.firstChild) {
    container.removeChild(container.firstChild);
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function selectionButton(
  label: string,
  selected: boolean,
  onSelect: () => void,
): HTMLButtonElement {
  const button = el("button", selected ? "nav-item selected" : "nav-item");
  button.type = "button";
  button.textContent = label;
  button.setAttribute("aria-pressed", String(selected));
  button.addEventListener("click", onSelect);
  return button;
}

export function renderError(
  container: HTMLElement,
  message: string,
  onRetry: () => void,
): void {
  clear(container);
  const banner = el("div", "error-banner");
  banner.setAttribute("role", "alert");
  banner.appendChild(el("span", "error-message", message));
  const retry = el("button", "retry");
  retry.type = "button";
  retry.textContent = "Retry";
  retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  container.appendChild(banner);
}

export function renderPersonList(
  container: HTMLElement,
  persons: PersonRow[],
  selected: string | null,
  onSelect: (personId: string) => void,
): void {
  clear(container);
  container.appendChild(el("h2", "panel-title", "Persons"));
  if (persons.length === 0) {
    container.appendChild(el("p", "empty-state", "The corpus contains no persons."));
    return;
  }
  const list = el("ul", "person-list");
  for (const person of persons) {
    const item = el("li");
    const button = selectionButton("", person.person_id === selected, () =>
      onSelect(person.person_id),
    );
    button.appendChild(el("span", "person-name", person.full_name));
    button.appendChild(el("span", "person-lifespan", person.lifespan));
    button.appendChild(
      el("span", "person-roles", `${person.role_count} role${person.role_count === 1 ? "" : "s"}`),
    );
    item.appendChild(button);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderRolePanel(
  container: HTMLElement,
  detail: PersonDetail,
  selectedRole: string | null,
  onSelect: (role: string) => void,
): void {
  clear(container);
  container.appendChild(el("h2", "panel-title", detail.profile.full_name));
  container.appendChild(
    el(
      "p",
      "person-meta",
      `${detail.profile.birth_year}-${detail.profile.death_year}`,
    ),
  );
  if (detail.roles.length === 0) {
    container.appendChild(el("p", "empty-state", "No roles available."));
    return;
  }
  const list = el("ul", "role-list");
  for (const entry of detail.roles) {
    const item = el("li");
    const button = selectionButton("", entry.role === selectedRole, () => onSelect(entry.role));
    button.appendChild(el("span", "role-name", entry.role));
    button.appendChild(el("span", "role-aspects", `${entry.aspect_count} aspects`));
    item.appendChild(button);
    list.appendChild(item);
  }
  container.appendChild(list);
}

export function renderAspectList(
  container: HTMLElement,
  aspects: AspectRow[],
  selectedAspect: string | null,
  onSelect: (aspect: string) => void,
): void {
  clear(container);
  container.appendChild(el("h2", "panel-title", "Aspects"));
  if (aspects.length === 0) {
    container.appendChild(el("p", "empty-state", "No classified articles for this role."));
    return;
  }
  const list = el("ul", "aspect-list");
  for (const aspect of aspects) {
    const item = el("li");
    const button = selectionButton("", aspect.aspect === selectedAspect, () =>
      onSelect(aspect.aspect),
    );
    button.appendChild(el("span", "aspect-label", aspect.labels[0] ?? aspect.aspect));
    button.appendChild(el("span", "aspect-count", `${aspect.snippet_count} snippets`));
    item.appendChild(button);
    list.appendChild(item);
  }
  container.appendChild(list);
}

function aspectHeading(view: AspectView): HTMLElement {
  const header = el("header", "aspect-header");
  header.appendChild(el("h2", "panel-title", view.labels[0] ?? view.aspect));
  if (view.labels.length > 1) {
    const details = el("details", "label-disclosure");
    details.appendChild(
      el("summary", undefined, `${view.labels.length - 1} more label(s)`),
    );
    const list = el("ul", "label-list");
    for (const label of view.labels.slice(1)) {
      list.appendChild(el("li", undefined, label));
    }
    details.appendChild(list);
    header.appendChild(details);
  }
  return header;
}

function snippetCard(snippet: SnippetCard): HTMLElement {
  const card = el("article", "snippet-card");
  card.appendChild(el("p", "fragment", snippet.fragment));
  const meta = el("footer", "snippet-meta");
  meta.appendChild(el("span", "snippet-date", snippet.date));
  meta.appendChild(el("span", "snippet-newspaper", snippet.newspaper));
  meta.appendChild(
    el("span", "snippet-probability", `p=${snippet.probability.toFixed(3)}`),
  );
  const link = el("a", "snippet-link", "Open in archive");
  link.href = snippet.external_url;
  link.target = "_blank";
  link.rel = "noopener noreferrer";
  meta.appendChild(link);
  card.appendChild(meta);
  return card;
}

export function renderAspectView(container: HTMLElement, view: AspectView): void {
  clear(container);
  container.appendChild(aspectHeading(view));

  if (view.summary !== null) {
    const section = el("section", "summary");
    section.appendChild(el("h3", undefined, `Summary (top ${view.summary.k_used} snippets)`));
    const quote = el("blockquote", "summary-text");
    for (const sentence of view.summary.sentences) {
      quote.appendChild(el("p", "summary-sentence", sentence.text));
    }
    section.appendChild(quote);
    if (view.metrics !== null) {
      const badge = el("p", "readability-badge");
      badge.textContent =
        `Flesch NL ${view.metrics.flesch_nl.toFixed(1)} · ` +
        `Dale-Chall ${view.metrics.dale_chall.toFixed(1)} · ` +
        `reading time ${Math.round(view.metrics.reading_time_s)}s`;
      section.appendChild(badge);
    }
    container.appendChild(section);
  } else {
    container.appendChild(
      el("p", "no-summary", "no summary (fewer than 5 snippets)"),
    );
  }

  const section = el("section", "snippets");
  section.appendChild(el("h3", undefined, `Articles (${view.snippets.length})`));
  for (const snippet of view.snippets) {
    section.appendChild(snippetCard(snippet));
  }
  container.appendChild(section);
}
