// Single-page shell: hash routing over the three views plus a blacklist
// home, with a 2-second polling refresh of whatever is on screen.

import { ApiClient, ApiError, defaultClient } from "./api.js";
import { renderDetailView, renderNotFound } from "./detail.js";
import { el, formatScore } from "./format.js";
import { renderGraphView } from "./graph.js";
import { renderTimelineView } from "./timeline.js";
import { renderVerificationView } from "./verification.js";

const POLL_MS = 2000;

type Route =
  | { view: "home" }
  | { view: "verify"; urlId: string }
  | { view: "detail"; urlId: string }
  | { view: "graph"; urlId: string };

export function parseRoute(hash: string): Route {
  const parts = hash.replace(/^#\/?/, "").split("/").filter(Boolean);
  if (parts[0] === "url" && parts[1]) {
    if (parts[2] === "detail") return { view: "detail", urlId: parts[1] };
    if (parts[2] === "graph") return { view: "graph", urlId: parts[1] };
    return { view: "verify", urlId: parts[1] };
  }
  return { view: "home" };
}

async function renderHome(client: ApiClient): Promise<HTMLElement> {
  const root = el("section", { class: "home-view" });
  root.append(el("h2", {}, ["Blacklist"]));
  const entries = await client.getBlacklist();
  if (entries.length === 0) {
    root.append(el("p", { class: "empty-state" }, ["no URLs are currently flagged"]));
  } else {
    const table = el("table", { class: "blacklist" });
    table.append(el("tr", {}, [el("th", {}, ["URL"]), el("th", {}, ["score"])]));
    for (const entry of entries) {
      table.append(
        el("tr", {}, [el("td", {}, [entry.url]), el("td", {}, [formatScore(entry.phish_score)])]),
      );
    }
    root.append(table);
  }
  return root;
}

async function renderRoute(client: ApiClient, route: Route, rerender: () => void): Promise<HTMLElement> {
  try {
    switch (route.view) {
      case "home":
        return await renderHome(client);
      case "verify": {
        const view = await client.getUrl(route.urlId);
        return renderVerificationView(client, view, { onVoted: rerender });
      }
      case "detail": {
        const view = await client.getUrl(route.urlId);
        return renderDetailView(view);
      }
      case "graph": {
        const [graph, timeline] = await Promise.all([
          client.getGraph(),
          client.getTimeline(route.urlId),
        ]);
        const root = el("section", {});
        root.append(renderGraphView(graph), renderTimelineView(timeline.timeline));
        return root;
      }
    }
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      return renderNotFound("urlId" in route ? route.urlId : "");
    }
    return el("section", { class: "error-view" }, [
      el("p", { class: "banner banner-error" }, [String(err)]),
    ]);
  }
}

export function startApp(client: ApiClient = defaultClient()): void {
  const outlet = document.getElementById("app");
  if (!outlet) {
    throw new Error("missing #app outlet");
  }
  let requestSeq = 0;

  const draw = async () => {
    const seq = ++requestSeq;
    const route = parseRoute(location.hash);
    const rendered = await renderRoute(client, route, draw);
    if (seq === requestSeq) {
      outlet.replaceChildren(rendered); // last-write-wins per request sequence
    }
  };

  window.addEventListener("hashchange", draw);
  setInterval(draw, POLL_MS);
  void draw();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp();
}
