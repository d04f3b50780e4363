import { describe, expect, it } from "vitest";

import { CATEGORY_COLORS, renderScatterSVG, scatterPoints } from "../src/scatter.js";
import { H5_CHART } from "./fixtures.js";

describe("pre/post scatter", () => {
  it("places anticipatory points above the diagonal", () => {
    const points = scatterPoints(H5_CHART);
    const anticipatory = points.find((p) => p.direction === "anticipatory")!;
    expect(anticipatory.aboveDiagonal).toBe(true);
    expect(anticipatory.pre).toBeGreaterThan(anticipatory.post);
    const reactive = points.find((p) => p.direction === "reactive")!;
    expect(reactive.aboveDiagonal).toBe(false);
  });

  it("colors points by category", () => {
    const points = scatterPoints(H5_CHART);
    expect(points[0].color).toBe(CATEGORY_COLORS.elections);
    expect(points[1].color).toBe(CATEGORY_COLORS.domestic_policy);
  });

  it("draws borders only on significant points", () => {
    const svg = renderScatterSVG(H5_CHART);
    const bordered = (svg.match(/stroke="#000"/g) ?? []).length;
    expect(bordered).toBe(1);
  });

  it("includes the diagonal reference line", () => {
    expect(renderScatterSVG(H5_CHART)).toContain('class="diagonal"');
  });

  it("keeps skipped events out of the points", () => {
    expect(scatterPoints(H5_CHART)).toHaveLength(2);
    expect(H5_CHART.skipped).toBe(1);
  });
});
