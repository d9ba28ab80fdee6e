// DOM wiring for the README labeler single-page client.

import { HttpLabelerApi } from "./api.js";
import { escapeHtml, renderMarkdown } from "./markdown.js";
import { LabelerSession } from "./session.js";

const FLAG_KEYS: Record<string, "non_english" | "too_simple"> = {
  n: "non_english",
  t: "too_simple",
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function annotatorId(): string {
  const params = new URLSearchParams(window.location.search);
  const fromQuery = params.get("annotator");
  if (fromQuery) {
    window.localStorage.setItem("annotator_id", fromQuery);
    return fromQuery;
  }
  const stored = window.localStorage.getItem("annotator_id");
  if (stored) {
    return stored;
  }
  const entered = window.prompt("annotator id:") || "anonymous";
  window.localStorage.setItem("annotator_id", entered);
  return entered;
}

const session = new LabelerSession(new HttpLabelerApi(), annotatorId());
let showRaw = false;

function render(): void {
  const status = el<HTMLDivElement>("status");
  const card = el<HTMLDivElement>("task-card");
  const doneBox = el<HTMLDivElement>("done");
  el<HTMLSpanElement>("who").textContent = session.annotatorId;

  if (session.state === "error") {
    status.textContent = `service error: ${session.lastError} (will retry)`;
    status.className = "banner error";
    window.setTimeout(() => void session.loadNext().then(render), 2000);
    return;
  }
  if (session.state === "done") {
    card.hidden = true;
    doneBox.hidden = false;
    el<HTMLSpanElement>("done-count").textContent = String(session.counts.submitted);
    status.textContent = "";
    status.className = "banner";
    return;
  }
  if (session.state !== "labeling" || !session.current) {
    status.textContent = "loading…";
    status.className = "banner";
    return;
  }
  const task = session.current;
  card.hidden = false;
  doneBox.hidden = true;
  status.textContent = session.lastError ?? "";
  status.className = session.lastError ? "banner error" : "banner";
  el<HTMLSpanElement>("position").textContent =
    `${task.position.done + 1} of ${task.position.total}`;
  el<HTMLAnchorElement>("repo-link").textContent = task.repo_url;
  el<HTMLAnchorElement>("repo-link").href = task.repo_url;
  el<HTMLHeadingElement>("unit-header").textContent =
    task.header_text || "(preamble before first header)";
  const subtext = el<HTMLDivElement>("subtext");
  if (showRaw) {
    subtext.innerHTML = `<pre class="raw">${escapeHtml(task.subtext)}</pre>`;
  } else {
    subtext.innerHTML = renderMarkdown(task.subtext) || "<p class=\"empty\">(no subtext)</p>";
  }

  const labelBox = el<HTMLDivElement>("labels");
  labelBox.innerHTML = "";
  task.categories.forEach((category, index) => {
    const button = document.createElement("button");
    button.type = "button";
    button.className = session.selections.has(category) ? "label active" : "label";
    button.textContent = `${index + 1}. ${category}`;
    button.addEventListener("click", () => {
      session.toggleLabel(category);
      render();
    });
    labelBox.appendChild(button);
  });
  (el<HTMLInputElement>("flag-non-english")).checked = session.nonEnglish;
  (el<HTMLInputElement>("flag-too-simple")).checked = session.tooSimple;
  (el<HTMLButtonElement>("submit")).disabled = !session.canSubmit();
}

function wire(): void {
  el<HTMLInputElement>("flag-non-english").addEventListener("change", () => {
    session.toggleFlag("non_english");
    render();
  });
  el<HTMLInputElement>("flag-too-simple").addEventListener("change", () => {
    session.toggleFlag("too_simple");
    render();
  });
  el<HTMLButtonElement>("submit").addEventListener("click", () => {
    void session.submit().then(render);
  });
  el<HTMLButtonElement>("toggle-raw").addEventListener("click", () => {
    showRaw = !showRaw;
    render();
  });
  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLInputElement) {
      return;
    }
    const key = event.key.toLowerCase();
    if (key >= "1" && key <= "8" && session.current) {
      session.toggleLabel(session.current.categories[Number(key) - 1]);
      render();
    } else if (key in FLAG_KEYS) {
      session.toggleFlag(FLAG_KEYS[key]);
      render();
    } else if (key === "enter" && session.canSubmit()) {
      void session.submit().then(render);
    }
  });
}

wire();
void session.loadNext().then(render);
