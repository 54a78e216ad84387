// Detail dashboard: submitter, per-voter verdicts with skill points, and the
// final score with its status badge.

import { UrlView } from "./api.js";
import { el, formatScore, statusBadgeClass } from "./format.js";

export function renderDetailView(view: UrlView): HTMLElement {
  const root = el("section", { class: "detail-view" });
  root.append(
    el("h2", {}, ["URL detail"]),
    el("p", { class: "url", "data-role": "url" }, [view.url]),
    el("p", {}, [
      "submitted by ",
      el("strong", { "data-role": "submitter" }, [view.submitter]),
      ` in block ${view.first_block_height}`,
    ]),
    el("span", { class: statusBadgeClass(view.status), "data-role": "status" }, [view.status]),
    el("span", { class: "score", "data-role": "score" }, [formatScore(view.phish_score)]),
  );

  const table = el("table", { class: "voters" });
  table.append(
    el("tr", {}, [
      el("th", {}, ["#"]),
      el("th", {}, ["verifier"]),
      el("th", {}, ["verdict"]),
      el("th", {}, ["skill points"]),
    ]),
  );
  for (const vote of view.votes) {
    table.append(
      el("tr", { class: "voter-row" }, [
        el("td", {}, [String(vote.ordinal)]),
        el("td", {}, [vote.verifier_id]),
        el("td", {}, [vote.verdict]),
        el("td", {}, [String(vote.skill_points)]),
      ]),
    );
  }
  root.append(table);
  return root;
}

export function renderNotFound(urlId: string): HTMLElement {
  return el("section", { class: "not-found" }, [
    el("h2", {}, ["Not found"]),
    el("p", {}, [`no record for ${urlId}`]),
  ]);
}
