/** Shared HTML-string helpers used by every page renderer. */

export function esc(text: unknown): string {
  return String(text)
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function signBadge(sign: "positive" | "negative"): string {
  return sign === "positive"
    ? '<span class="badge positive">+</span>'
    : '<span class="badge negative">−</span>';
}

export function formatPoints(points: number): string {
  return points > 0 ? `+${points}` : String(points);
}

export function errorBanner(message: string): string {
  return `<div class="banner error">${esc(message)}</div>`;
}
