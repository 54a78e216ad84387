import { describe, expect, it } from "vitest";

import { renderVerificationView } from "../src/verification.js";
import { FixtureServer, urlViewFixture } from "./helpers.js";

const URL_ID = "ab".repeat(32);

function clickVerdict(root: HTMLElement, verdict: string): void {
  const button = root.querySelector<HTMLButtonElement>(`button[data-verdict="${verdict}"]`);
  expect(button).not.toBeNull();
  button!.click();
}

describe("verification view", () => {
  it("sends the exact vote POST body", async () => {
    const server = new FixtureServer();
    server.route("POST", `/api/v1/urls/${URL_ID}/votes`, {
      tx_id: "t1",
      accepted: true,
      committed: true,
    });
    const root = renderVerificationView(server.client(), urlViewFixture());
    root.querySelector<HTMLInputElement>('input[data-role="sender"]')!.value = "alice";
    clickVerdict(root, "Phishing");
    await new Promise((resolve) => setTimeout(resolve, 0));

    expect(server.calls).toHaveLength(1);
    expect(server.calls[0].method).toBe("POST");
    expect(server.calls[0].url).toBe(`/api/v1/urls/${URL_ID}/votes`);
    expect(server.calls[0].body).toBe('{"sender":"alice","verdict":"Phishing"}');
  });

  it("shows the transaction id on success", async () => {
    const server = new FixtureServer();
    server.route("POST", `/api/v1/urls/${URL_ID}/votes`, {
      tx_id: "feedbeef",
      accepted: true,
      committed: true,
    });
    const root = renderVerificationView(server.client(), urlViewFixture());
    root.querySelector<HTMLInputElement>('input[data-role="sender"]')!.value = "alice";
    clickVerdict(root, "NotPhishing");
    await new Promise((resolve) => setTimeout(resolve, 0));

    const banner = root.querySelector('[data-role="banner"]')!;
    expect(banner.textContent).toContain("feedbeef");
    expect(server.calls[0].body).toBe('{"sender":"alice","verdict":"NotPhishing"}');
  });

  it("renders a duplicate vote rejection inline", async () => {
    const server = new FixtureServer();
    server.route("POST", `/api/v1/urls/${URL_ID}/votes`, { error: "DuplicateVote" }, 400);
    const root = renderVerificationView(server.client(), urlViewFixture());
    root.querySelector<HTMLInputElement>('input[data-role="sender"]')!.value = "alice";
    clickVerdict(root, "Phishing");
    await new Promise((resolve) => setTimeout(resolve, 0));

    const banner = root.querySelector('[data-role="banner"]')!;
    expect(banner.textContent).toBe("DuplicateVote");
    expect(banner.className).toContain("banner-error");
  });

  it("shows Unverified while the score is absent", () => {
    const server = new FixtureServer();
    const root = renderVerificationView(
      server.client(),
      urlViewFixture({ status: "Unverified", phish_score: null }),
    );
    expect(root.querySelector('[data-role="score"]')!.textContent).toBe("Unverified");
  });
});
