// Server-side SVG rendering via the echarts SSR mode.

import * as echarts from "echarts";
import type { EChartsOption } from "echarts";

export function renderSvg(option: EChartsOption, width = 800, height = 520): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
  chart.setOption(option);
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}
