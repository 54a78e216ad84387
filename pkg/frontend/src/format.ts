// Display formatting. Scores render with at most 4 decimal places and no
// further client-side arithmetic, so what the user sees matches the API.

export function formatScore(score: number | null): string {
  if (score === null) {
    return "Unverified";
  }
  return score.toFixed(4);
}

export function statusBadgeClass(status: string): string {
  switch (status) {
    case "Phishing":
      return "badge badge-phishing";
    case "NotPhishing":
      return "badge badge-clean";
    default:
      return "badge badge-unverified";
  }
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}
