/**
 * Live triage loop against a real service process seeded with five
 * planted mislabels: review the queue, key in the five correcting
 * verdicts, survive a reload with them pending, submit, retrain, and
 * watch the refreshed queue's worst |alpha| drop.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, expect, test } from "vitest";

import { TriageApi } from "../src/api.js";
import { TriageSession } from "../src/session.js";
import { TriageView } from "../src/ui.js";

interface Flip {
  doc_id: string;
  action: "move_in" | "move_out";
}

interface Ready {
  port: number;
  category: string;
  flips: Flip[];
}

let service: ChildProcess;
let ready: Ready;
let api: TriageApi;

const QUEUE_SIZE = 50;

function waitForReady(child: ChildProcess): Promise<Ready> {
  return new Promise((resolve, reject) => {
    let buffer = "";
    child.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const line = buffer.split("\n").find((l) => l.startsWith("READY "));
      if (line) resolve(JSON.parse(line.slice("READY ".length)) as Ready);
    });
    child.stderr!.on("data", (chunk: Buffer) => {
      process.stderr.write(chunk);
    });
    child.on("exit", (code) => reject(new Error(`service exited early (${code})`)));
  });
}

async function waitForHttp(port: number): Promise<void> {
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      const res = await fetch(`http://127.0.0.1:${port}/v1/categories`);
      if (res.ok) return;
    } catch {
      // still booting
    }
    if (Date.now() > deadline) throw new Error("service never came up");
    await new Promise((r) => setTimeout(r, 250));
  }
}

beforeAll(async () => {
  service = spawn("python3", ["tests/serve_fixture.py"], { cwd: process.cwd() });
  ready = await waitForReady(service);
  await waitForHttp(ready.port);
  api = new TriageApi(`http://127.0.0.1:${ready.port}`);
  localStorage.clear();
});

afterAll(() => {
  service?.kill("SIGTERM");
});

function mount(): { session: TriageSession; view: TriageView; root: HTMLElement } {
  document.body.innerHTML = "<div id='app'></div>";
  const root = document.getElementById("app") as HTMLElement;
  const session = new TriageSession(api, ready.category);
  const view = new TriageView(root, session, QUEUE_SIZE);
  return { session, view, root };
}

function keyVerdict(view: TriageView, session: TriageSession, flip: Flip): void {
  // Walk the cursor to the row from the top; ArrowUp clamps at zero.
  const index = session.queue.findIndex((r) => r.doc_id === flip.doc_id);
  expect(index, `planted flip ${flip.doc_id} missing from the queue`).toBeGreaterThanOrEqual(0);
  for (let i = 0; i <= session.queue.length; i++) view.handleKey("ArrowUp");
  for (let i = 0; i < index; i++) view.handleKey("ArrowDown");
  view.handleKey(flip.action === "move_in" ? "i" : "o");
}

function maxAbsAlpha(root: HTMLElement): number {
  // Read what the operator sees: the rendered alpha column.
  const cells = [...root.querySelectorAll("td.alpha")].map((c) => Number(c.textContent));
  expect(cells.length).toBeGreaterThan(0);
  return Math.max(...cells.map(Math.abs));
}

test("operator fixes the planted mislabels and the queue calms down", async () => {
  const first = mount();
  await first.session.loadQueue(QUEUE_SIZE);
  expect(first.session.lastError).toBeNull();
  const staleMax = maxAbsAlpha(first.root);

  for (const flip of ready.flips) keyVerdict(first.view, first.session, flip);
  expect(first.session.pending.size).toBe(5);

  // Reload: a fresh session over the same browser storage must pick the
  // five verdicts back up once the queue shows their rows again.
  const second = mount();
  expect(second.session.pending.size).toBe(0);
  await second.session.loadQueue(QUEUE_SIZE);
  expect(second.session.pending.size).toBe(5);
  for (const flip of ready.flips) {
    expect(second.session.pending.get(flip.doc_id)!.action).toBe(flip.action);
  }

  const summary = await second.session.submit();
  expect(summary).not.toBeNull();
  expect(summary!.moved_in + summary!.moved_out).toBe(5);
  expect(second.session.pending.size).toBe(0);
  expect(second.session.queueStale).toBe(true);
  expect(second.root.querySelector(".banner .stale")).not.toBeNull();

  const refreshed = await second.session.retrainAndRefresh(QUEUE_SIZE);
  expect(refreshed).not.toBeNull();
  expect(second.session.lastRetrain!.status).toBe("done");
  expect(second.session.queueStale).toBe(false);
  expect(second.session.phase).toBe("reviewing");

  const calmMax = maxAbsAlpha(second.root);
  expect(calmMax).toBeLessThan(staleMax);

  // Acknowledged verdicts do not linger in storage for a later load.
  const third = mount();
  await third.session.loadQueue(QUEUE_SIZE);
  expect(third.session.pending.size).toBe(0);
}, 180_000);
