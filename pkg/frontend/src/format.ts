/** Display formatting. Numbers come verbatim from the API; the only
 * client-side transformation is display precision of at most 2 decimals
 * (trailing zeros trimmed, so 54.7 renders as "54.7", not "54.70"). */

export function displayNumber(value: number | null | undefined, decimals = 2): string {
  if (value === null || value === undefined || Number.isNaN(value)) {
    return "---";
  }
  const factor = Math.pow(10, decimals);
  const rounded = Math.round(value * factor) / factor;
  let text = rounded.toFixed(decimals);
  if (text.includes(".")) {
    text = text.replace(/0+$/, "").replace(/\.$/, "");
  }
  // avoid "-0"
  return text === "-0" ? "0" : text;
}

/** p-values use a declared display precision of 4 decimals. */
export function displayP(p: number | null): string {
  if (p === null) return "---";
  if (p === 0) return "0";
  if (p < 0.0001) return p.toExponential(2);
  return displayNumber(p, 4);
}
