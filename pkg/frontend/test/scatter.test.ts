import { describe, expect, it } from "vitest";

import { NOISE_COLOR } from "../src/colors";
import { renderScatterSvg } from "../src/scatter";
import { fiveClusterReport } from "./fixtures";

const report = fiveClusterReport();

describe("renderScatterSvg", () => {
  it("renders every idea as an interactive point", () => {
    const svg = renderScatterSvg(report);
    expect(svg.match(/data-idea-id=/g)).toHaveLength(21);
    expect(svg.match(/class="hull"/g)).toHaveLength(5);
  });

  it("noise styling is distinct from every cluster color", () => {
    const svg = renderScatterSvg(report);
    expect(svg).toContain(`class="point noise"`);
    expect(svg).toContain(NOISE_COLOR);
    const clusterFills = new Set(
      [...svg.matchAll(/class="point cluster-\d+"[^>]*fill="(#\w{6})"/g)].map((m) => m[1]),
    );
    expect(clusterFills.size).toBe(5);
    expect(clusterFills.has(NOISE_COLOR)).toBe(false);
  });

  it("titles appear as tooltips unless blind", () => {
    expect(renderScatterSvg(report)).toContain("<title>Idea 0</title>");
    expect(renderScatterSvg(report, { blind: true })).not.toContain("<title>");
  });

  it("selected points are ringed", () => {
    const svg = renderScatterSvg(report, { selected: new Set(["i3"]) });
    const selected = svg.match(/class="point cluster-0 selected"[^>]*/)?.[0] ?? "";
    expect(selected).toContain(`stroke="#111111"`);
  });

  it("stable colors across renders and selections", () => {
    const a = renderScatterSvg(report);
    const b = renderScatterSvg(report, { selected: new Set(["i0"]) });
    const fillOf = (svg: string, id: string) =>
      svg.match(new RegExp(`data-idea-id="${id}"[^>]*fill="(#\\w{6})"`))?.[1];
    for (const id of ["i0", "i4", "i8", "noise-0"]) {
      expect(fillOf(a, id)).toBe(fillOf(b, id));
    }
  });

  it("escapes markup in titles", () => {
    const hostile = {
      ...report,
      ideas: report.ideas.map((idea, i) =>
        i === 0 ? { id: idea.id, title: `<b>&"bold"</b>` } : idea,
      ),
    };
    const svg = renderScatterSvg(hostile);
    expect(svg).toContain("&lt;b&gt;&amp;&quot;bold&quot;&lt;/b&gt;");
  });
});
