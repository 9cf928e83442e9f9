import init, { free_energy_curve, trajectory, subdivision_curve, stability } from "./pkg/meanforce_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

function value(id) {
  return parseFloat(document.getElementById(id).value);
}

function report(err) {
  document.getElementById("error").textContent = err ? String(err) : "";
}

// series: [{ label, xs, ys }]
function plot(canvasId, series, { logX = false, xLabel = "", yLabel = "" } = {}) {
  const canvas = document.getElementById(canvasId);
  const ctx = canvas.getContext("2d");
  const pad = { l: 70, r: 150, t: 15, b: 40 };
  const w = canvas.width - pad.l - pad.r;
  const h = canvas.height - pad.t - pad.b;
  const fx = logX ? Math.log10 : (x) => x;
  let [x0, x1, y0, y1] = [Infinity, -Infinity, Infinity, -Infinity];
  for (const s of series) {
    s.xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!Number.isFinite(y)) return;
      x0 = Math.min(x0, fx(x)); x1 = Math.max(x1, fx(x));
      y0 = Math.min(y0, y); y1 = Math.max(y1, y);
    });
  }
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const px = (x) => pad.l + ((fx(x) - x0) / (x1 - x0)) * w;
  const py = (y) => pad.t + (1 - (y - y0) / (y1 - y0)) * h;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad.l, pad.t, w, h);
  ctx.fillStyle = "#222";
  ctx.font = "12px sans-serif";
  for (let k = 0; k <= 4; k++) {
    const yv = y0 + ((y1 - y0) * k) / 4;
    ctx.fillText(yv.toPrecision(3), 5, py(yv) + 4);
    const xv = x0 + ((x1 - x0) * k) / 4;
    ctx.fillText((logX ? 10 ** xv : xv).toPrecision(3), pad.l + (w * k) / 4 - 12, canvas.height - 22);
  }
  ctx.fillText(xLabel, pad.l + w / 2, canvas.height - 5);
  ctx.fillText(yLabel, 5, 12);

  series.forEach((s, n) => {
    ctx.strokeStyle = COLORS[n % COLORS.length];
    ctx.beginPath();
    let pen = false;
    s.xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(s.label, pad.l + w + 10, pad.t + 15 + 16 * n);
  });
}

function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  for (let i = 0; i < flat.length; i += width) {
    for (let c = 0; c < width; c++) cols[c].push(flat[i + c]);
  }
  return cols;
}

function runFreeEnergy() {
  const [eta, a] = columns(free_energy_curve(value("fe-gamma"), 1 / value("fe-temp"), 0.5, 200), 2);
  plot("fe-plot", [{ label: "A_hyb", xs: eta, ys: a }], { xLabel: "η", yLabel: "A_hyb" });
}

function runDynamics() {
  const [eta, gamma, beta] = [value("dyn-eta"), value("dyn-gamma"), 1 / value("dyn-temp")];
  const tmax = value("dyn-tmax");
  document.getElementById("dyn-class").textContent = stability(eta, gamma);
  const [t, q, p, sqq, spp, sqp] = columns(trajectory(eta, gamma, beta, tmax, Math.round(tmax * 10)), 6);
  plot("dyn-plot", [
    { label: "q̄", xs: t, ys: q },
    { label: "p̄", xs: t, ys: p },
    { label: "σ_qq", xs: t, ys: sqq },
    { label: "σ_pp", xs: t, ys: spp },
    { label: "σ_qp", xs: t, ys: sqp },
  ], { xLabel: "t" });
}

function runSubdivision() {
  const etas = document.getElementById("sub-etas").value.split(",").map(parseFloat).filter(Number.isFinite);
  const series = etas.map((eta) => {
    const [temp, e] = columns(subdivision_curve(eta, value("sub-gamma"), 0.02, 5, 120), 2);
    return { label: `η = ${eta}`, xs: temp, ys: e };
  });
  plot("sub-plot", series, { logX: true, xLabel: "k_BT", yLabel: "ℰ" });
}

function guarded(run) {
  return () => {
    try { report(null); run(); } catch (e) { report(e); }
  };
}

await init();
for (const [button, run] of [["fe-run", runFreeEnergy], ["dyn-run", runDynamics], ["sub-run", runSubdivision]]) {
  const go = guarded(run);
  document.getElementById(button).addEventListener("click", go);
  go();
}
