// Verification view: the URL, its evidence email, and the two verdict
// actions. Rejections from the API render inline with their reason code.

import { ApiClient, ApiError, UrlView, Verdict } from "./api.js";
import { el, formatScore, statusBadgeClass } from "./format.js";

export interface VerificationCallbacks {
  onVoted?: () => void;
}

export function renderVerificationView(
  client: ApiClient,
  view: UrlView,
  callbacks: VerificationCallbacks = {},
): HTMLElement {
  const root = el("section", { class: "verification-view" });
  root.append(
    el("h2", {}, ["Verify URL"]),
    el("p", { class: "url", "data-role": "url" }, [view.url]),
    el("span", { class: statusBadgeClass(view.status), "data-role": "status" }, [view.status]),
    el("span", { class: "score", "data-role": "score" }, [formatScore(view.phish_score)]),
    el("h3", {}, ["Evidence email"]),
    el("pre", { class: "evidence" }, [view.evidence_email]),
  );

  const senderInput = el("input", {
    type: "text",
    placeholder: "your verifier id",
    "data-role": "sender",
  });
  const banner = el("p", { class: "banner", "data-role": "banner" });
  const buttons = el("div", { class: "actions" });

  const makeButton = (verdict: Verdict) => {
    const button = el("button", { "data-verdict": verdict }, [verdict]);
    button.addEventListener("click", async () => {
      banner.textContent = "";
      banner.className = "banner";
      try {
        const result = await client.castVote(view.url_id, senderInput.value, verdict);
        banner.classList.add("banner-ok");
        banner.textContent = `vote accepted: tx ${result.tx_id}`;
        callbacks.onVoted?.();
      } catch (err) {
        banner.classList.add("banner-error");
        banner.textContent = err instanceof ApiError ? err.code : String(err);
      }
    });
    return button;
  };

  buttons.append(makeButton("Phishing"), makeButton("NotPhishing"));
  root.append(senderInput, buttons, banner);
  return root;
}
