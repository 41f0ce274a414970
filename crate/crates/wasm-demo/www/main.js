import init, { threshold, heatmap, scan } from "./pkg/orbital_l2_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const system = () => [$("family").value, Number($("rank").value)];

function guarded(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = e.message ?? String(e);
    }
  };
}

function colour(t) {
  // dark blue through yellow
  const r = Math.round(255 * Math.min(1, Math.max(0, 1.5 * t - 0.2)));
  const g = Math.round(255 * Math.min(1, Math.max(0, 1.2 * t)));
  const b = Math.round(255 * Math.max(0, 0.6 - t));
  return [r, g, b];
}

function drawHeatmap() {
  const [family, rank] = system();
  const size = Number($("size").value);
  const values = heatmap(family, rank, $("k").value, Number($("extent").value), size);
  const finite = values.filter(Number.isFinite);
  const hi = Math.max(...finite);
  const lo = Math.max(Math.min(...finite), hi - 8);
  const canvas = $("canvas");
  canvas.width = canvas.height = size;
  const ctx = canvas.getContext("2d");
  const image = ctx.createImageData(size, size);
  values.forEach((v, i) => {
    const t = Number.isFinite(v) ? Math.max(0, (v - lo) / (hi - lo || 1)) : 0;
    const [r, g, b] = colour(t);
    image.data.set([r, g, b, 255], 4 * i);
  });
  ctx.putImageData(image, 0, 0);
  $("heatmap-range").textContent = `log₁₀ range ${lo.toFixed(2)} … ${hi.toFixed(2)}`;
}

function runScan() {
  const [family, rank] = system();
  const text = scan(family, rank, $("k").value, Number($("shells").value),
    Number($("samples").value), BigInt($("seed").value));
  const report = JSON.parse(text);
  $("verdict").textContent =
    `${report.verdict}: fitted slope ${report.fitted_slope.toFixed(3)}, ` +
    `theory ${report.theory_slope.toFixed(3)}, k* = ${report.k_star}`;
  $("scan").textContent = report.shells
    .map((s) => `[${s.r_lo}, ${s.r_hi}]  ${s.mass.toExponential(4)} ± ${s.std_error.toExponential(2)}`)
    .join("\n");
}

await init();
$("threshold-btn").onclick = guarded(() => {
  const [family, rank] = system();
  $("threshold").textContent = `k* = ${threshold(family, rank)}`;
});
$("heatmap-btn").onclick = guarded(drawHeatmap);
$("scan-btn").onclick = guarded(runScan);
