/**
 * Application wiring: hash-driven routing over four panels
 * (persons, roles, aspects, detail).
 *
 * Every navigation bumps a token; responses arriving for an older
 * token are discarded, so a slow earlier request can never overwrite
 * a newer view. State changes always go through the URL hash, which
 * keeps views deep-linkable and the back button working.
 */

import { ApiClient } from "./api.js";
import { decodeHash, encodeHash, statesEqual, type ViewState } from "./state.js";
import {
  clear,
  renderAspectList,
  renderAspectView,
  renderError,
  renderPersonList,
  renderRolePanel,
} from "./render.js";

export class ExplorerApp {
  readonly personsPanel: HTMLElement;
  readonly rolesPanel: HTMLElement;
  readonly aspectsPanel: HTMLElement;
  readonly detailPanel: HTMLElement;
  readonly errorSlot: HTMLElement;

  state: ViewState = { person: null, role: null, aspect: null };
  private token = 0;
  private readonly onHashChange = (): void => {
    void this.route();
  };

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly win: Window = window,
  ) {
    this.errorSlot = this.panel("error-slot");
    this.personsPanel = this.panel("persons-panel");
    this.rolesPanel = this.panel("roles-panel");
    this.aspectsPanel = this.panel("aspects-panel");
    this.detailPanel = this.panel("detail-panel");
  }

  private panel(className: string): HTMLElement {
    const node = document.createElement("section");
    node.className = className;
    this.root.appendChild(node);
    return node;
  }

  async start(): Promise<void> {
    this.win.addEventListener("hashchange", this.onHashChange);
    await this.route();
  }

  stop(): void {
    this.token++; // invalidate every in-flight route
    this.win.removeEventListener("hashchange", this.onHashChange);
  }

  navigate(state: ViewState): Promise<void> {
    const hash = encodeHash(state);
    if (this.win.location.hash !== hash) {
      this.win.location.hash = hash;
    }
    // route directly as well: hashchange timing differs per host
    return this.route();
  }

  async route(): Promise<void> {
    const state = decodeHash(this.win.location.hash);
    const token = ++this.token;
    this.state = state;
    try {
      const persons = await this.api.persons();
      if (token !== this.token) {
        return;
      }
      clear(this.errorSlot);
      renderPersonList(this.personsPanel, persons, state.person, (person) => {
        void this.navigate({ person, role: null, aspect: null });
      });

      if (state.person === null) {
        clear(this.rolesPanel);
        clear(this.aspectsPanel);
        clear(this.detailPanel);
        return;
      }
      const detail = await this.api.person(state.person);
      if (token !== this.token) {
        return;
      }
      renderRolePanel(this.rolesPanel, detail, state.role, (role) => {
        void this.navigate({ person: state.person, role, aspect: null });
      });

      if (state.role === null) {
        clear(this.aspectsPanel);
        clear(this.detailPanel);
        return;
      }
      const roleAspects = await this.api.roleAspects(state.person, state.role);
      if (token !== this.token) {
        return;
      }
      renderAspectList(this.aspectsPanel, roleAspects.aspects, state.aspect, (aspect) => {
        void this.navigate({ person: state.person, role: state.role, aspect });
      });

      if (state.aspect === null) {
        clear(this.detailPanel);
        return;
      }
      const view = await this.api.aspectView(state.person, state.role, state.aspect);
      if (token !== this.token || !statesEqual(this.state, state)) {
        return;
      }
      renderAspectView(this.detailPanel, view);
    } catch (error) {
      if (token !== this.token) {
        return;
      }
      const message = error instanceof Error ? error.message : String(error);
      renderError(this.errorSlot, `Could not reach the corpus API: ${message}`, () => {
        void this.route();
      });
    }
  }
}

export function bootstrap(root: HTMLElement, baseUrl = ""): ExplorerApp {
  const app = new ExplorerApp(root, new ApiClient(baseUrl));
  void app.start();
  return app;
}
