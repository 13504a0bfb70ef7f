// DOM wiring: renders the rating screen and maps keys 1..6 to ratings.

import { HttpRatingApi } from "./api.js";
import { RatingSession, Screen } from "./session.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

function renderExemplars(session: RatingSession): void {
  const strip = el("exemplars");
  strip.innerHTML = "";
  for (const ex of session.exemplars) {
    const cell = document.createElement("figure");
    cell.className = "exemplar";
    const img = document.createElement("img");
    img.src = ex.url;
    img.alt = `${ex.label}: ${ex.name}`;
    const caption = document.createElement("figcaption");
    caption.textContent = `${ex.label} — ${ex.name}`;
    cell.append(img, caption);
    strip.append(cell);
  }
}

function render(session: RatingSession, screen: Screen): void {
  const stage = el("stage");
  const status = el("status");
  const buttons = el("buttons");
  buttons.querySelectorAll("button").forEach((b) => ((b as HTMLButtonElement).disabled = true));

  switch (screen.kind) {
    case "loading":
      status.textContent = "Loading…";
      break;
    case "rating": {
      stage.innerHTML = "";
      const img = document.createElement("img");
      img.id = "subject";
      img.src = screen.imageUrl;
      stage.append(img);
      status.textContent = `${screen.rated} / ${screen.total} rated — press 1–6`;
      buttons.querySelectorAll("button").forEach((b) => ((b as HTMLButtonElement).disabled = false));
      break;
    }
    case "retry":
      status.textContent = `Could not save your rating (${screen.message}). Press R to retry.`;
      break;
    case "done":
      stage.innerHTML = "";
      status.textContent = `All done — ${screen.rated} of ${screen.total} images rated. Thank you!`;
      break;
    case "error":
      status.textContent = `Failed to load: ${screen.message}. Reload the page to retry.`;
      break;
  }
}

function start(): void {
  const params = new URLSearchParams(window.location.search);
  const rater = params.get("rater") ?? "";
  const variant = params.get("variant") ?? "exemplar_corrected";
  const status = el("status");
  if (!rater) {
    status.textContent = "Add ?rater=YOUR_ID to the URL to begin.";
    return;
  }

  const session = new RatingSession(new HttpRatingApi(), rater, variant);
  session.onChange = (screen) => render(session, screen);

  const buttons = el("buttons");
  for (let fst = 1; fst <= 6; fst++) {
    const button = document.createElement("button");
    button.textContent = String(fst);
    button.disabled = true;
    button.addEventListener("click", () => void session.submit(fst));
    buttons.append(button);
  }

  document.addEventListener("keydown", (event) => {
    if (event.key >= "1" && event.key <= "6") {
      void session.submit(Number(event.key));
    } else if (event.key === "r" || event.key === "R") {
      void session.retry();
    }
  });

  void session.start().then(() => renderExemplars(session));
}

start();
