// Probability bar rendering. Pure string builders so the logic is testable
// without a DOM; main.ts assigns the result to innerHTML.

export interface BarRow {
  label: string;
  value: number;
  percent: number;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Rows sorted by descending probability; percent rounded to one decimal. */
export function barRows(probabilities: Record<string, number>): BarRow[] {
  return Object.entries(probabilities)
    .map(([label, value]) => ({
      label,
      value,
      percent: Math.round(value * 1000) / 10,
    }))
    .sort((a, b) => b.value - a.value);
}

export function barsHtml(probabilities: Record<string, number>): string {
  return barRows(probabilities)
    .map((row) => {
      const width = Math.max(0, Math.min(100, row.value * 100));
      return (
        `<div class="bar-row">` +
        `<span class="bar-label">${escapeHtml(row.label)}</span>` +
        `<span class="bar-track"><span class="bar-fill" style="width:${width}%"></span></span>` +
        `<span class="bar-percent">${row.percent.toFixed(1)}%</span>` +
        `</div>`
      );
    })
    .join("");
}
