/**
 * DOM view over a TriageSession. Renders whatever the session holds and
 * forwards operator input; every model number on screen is the string
 * form of a value the API returned, never something computed here.
 *
 * Keys: ArrowUp/ArrowDown move the cursor, i = move into the category,
 * o = move out, k = keep as labeled, u = withdraw the row's verdict.
 */

import { OutlierRow, VerdictAction } from "./api.js";
import { TriageSession } from "./session.js";

const ACTION_TEXT: Record<VerdictAction, string> = {
  move_in: "move in",
  move_out: "move out",
  keep: "keep",
};

export class TriageView {
  private cursor = 0;
  private root: HTMLElement;
  private session: TriageSession;
  private k: number;

  constructor(root: HTMLElement, session: TriageSession, k = 50) {
    this.root = root;
    this.session = session;
    this.k = k;
    session.onChange(() => this.render());
    this.render();
  }

  /** Single entry point for hotkeys; the page wires it to keydown. */
  handleKey(key: string): void {
    if (this.session.phase !== "reviewing") return;
    const row = this.session.queue[this.cursor];
    switch (key) {
      case "ArrowDown":
        this.moveCursor(1);
        break;
      case "ArrowUp":
        this.moveCursor(-1);
        break;
      case "i":
        if (row) this.verdict(row, "move_in");
        break;
      case "o":
        if (row) this.verdict(row, "move_out");
        break;
      case "k":
        if (row) this.verdict(row, "keep");
        break;
      case "u":
        if (row) this.session.withdraw(row.doc_id);
        break;
    }
  }

  private verdict(row: OutlierRow, action: VerdictAction): void {
    this.session.record(row.doc_id, action);
    this.moveCursor(1); // high-volume triage: judge, drop to the next row
  }

  private moveCursor(step: number): void {
    const last = Math.max(0, this.session.queue.length - 1);
    this.cursor = Math.min(last, Math.max(0, this.cursor + step));
    this.render();
  }

  refresh(): void {
    void this.session.loadQueue(this.k);
  }

  submit(): void {
    void this.session.submit();
  }

  retrain(): void {
    void this.session.retrainAndRefresh(this.k);
  }

  private el(tag: string, className: string, text?: string): HTMLElement {
    const node = document.createElement(tag);
    node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
  }

  render(): void {
    const s = this.session;
    this.root.textContent = "";
    this.root.append(
      this.banner(),
      this.table(),
      this.controls(),
      this.summary(),
    );
    if (this.cursor >= s.queue.length) {
      this.cursor = Math.max(0, s.queue.length - 1);
    }
  }

  private banner(): HTMLElement {
    const s = this.session;
    const banner = this.el("div", "banner");
    if (s.lastError) {
      const note = this.el("span", "error", `service error: ${s.lastError}`);
      const retry = this.el("button", "retry", "retry") as HTMLButtonElement;
      retry.addEventListener("click", () => this.refresh());
      banner.append(note, retry);
    }
    if (s.phase === "retraining") {
      const status = s.lastRetrain ? s.lastRetrain.status : "starting";
      banner.append(this.el("span", "progress", `retraining (${status})`));
    }
    if (s.lastRetrain && s.lastRetrain.status === "failed") {
      const detail = s.lastRetrain.error ?? "no detail";
      banner.append(this.el("span", "error", `retrain failed: ${detail}`));
    }
    if (s.queueStale) {
      banner.append(
        this.el("span", "stale", "queue is stale, retrain or refresh"),
      );
    }
    return banner;
  }

  private table(): HTMLElement {
    const s = this.session;
    if (s.queue.length === 0) {
      return this.el("p", "empty", `no outliers for ${s.category}`);
    }
    const table = this.el("table", "queue") as HTMLTableElement;
    const head = table.createTHead().insertRow();
    for (const name of ["rank", "alpha", "label", "f", "title", "verdict"]) {
      head.append(this.el("th", `col-${name}`, name));
    }
    const body = table.createTBody();
    s.queue.forEach((row, index) => {
      const tr = body.insertRow();
      tr.className = row.bounded ? "row bounded" : "row";
      if (index === this.cursor) tr.className += " cursor";
      tr.dataset.docId = row.doc_id;
      tr.append(
        this.el("td", "rank", String(row.rank)),
        this.el("td", "alpha", String(row.alpha)),
        this.el("td", "label", row.label === 1 ? "in" : "out"),
        this.el("td", "f", String(row.f)),
        this.el("td", "title", row.title),
        this.el(
          "td",
          "verdict",
          s.pending.has(row.doc_id)
            ? ACTION_TEXT[s.pending.get(row.doc_id)!.action]
            : "",
        ),
      );
    });
    return table;
  }

  private controls(): HTMLElement {
    const s = this.session;
    const bar = this.el("div", "controls");
    bar.append(this.el("span", "pending-count", `${s.pending.size} pending`));

    const submit = this.el("button", "submit", "submit batch") as HTMLButtonElement;
    submit.disabled = s.phase !== "reviewing" || s.pending.size === 0;
    submit.addEventListener("click", () => this.submit());

    const retrain = this.el("button", "retrain", "retrain") as HTMLButtonElement;
    retrain.disabled = s.phase !== "reviewing";
    retrain.addEventListener("click", () => this.retrain());

    const refresh = this.el("button", "refresh", "refresh") as HTMLButtonElement;
    refresh.disabled = s.phase !== "reviewing";
    refresh.addEventListener("click", () => this.refresh());

    bar.append(submit, retrain, refresh);
    return bar;
  }

  private summary(): HTMLElement {
    const panel = this.el("div", "summary");
    const last = this.session.history[this.session.history.length - 1];
    if (!last) return panel;
    panel.append(
      this.el("span", "moved-in", `+${last.moved_in} in`),
      this.el("span", "moved-out", `-${last.moved_out} out`),
      this.el("span", "kept", `${last.kept} kept`),
      this.el("span", "positives", `${last.positives_after} positives`),
      this.el("span", "rate", `rate ${last.positive_rate}`),
    );
    return panel;
  }
}
