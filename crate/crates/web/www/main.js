import init, {
  preset_names,
  exclusion_curve,
  squeezing_trace,
  coloured_scan,
  white_steady_ratio,
} from "./pkg/collapse_kit_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function pairs(flat) {
  const out = [];
  for (let i = 0; i < flat.length; i += 2) out.push([flat[i], flat[i + 1]]);
  return out;
}

// Line plot with optional log axes and horizontal reference lines.
function plot(canvas, points, { logX = false, logY = false, xLabel = "", yLabel = "", refs = [] }) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height;
  const pad = { l: 70, r: 15, t: 15, b: 40 };
  ctx.clearRect(0, 0, W, H);
  const fx = logX ? Math.log10 : (v) => v;
  const fy = logY ? Math.log10 : (v) => v;
  const pts = points.filter(([x, y]) => Number.isFinite(fx(x)) && Number.isFinite(fy(y)));
  if (pts.length === 0) return;
  const xs = pts.map(([x]) => fx(x));
  const ys = pts.map(([, y]) => fy(y)).concat(refs.map((r) => fy(r.y)));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (x1 === x0) { x0 -= 1; x1 += 1; }
  if (y1 === y0) { y0 -= 1; y1 += 1; }
  const m = 0.05 * (y1 - y0);
  y0 -= m; y1 += m;
  const px = (v) => pad.l + ((v - x0) / (x1 - x0)) * (W - pad.l - pad.r);
  const py = (v) => H - pad.b - ((v - y0) / (y1 - y0)) * (H - pad.t - pad.b);

  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad.l, pad.t, W - pad.l - pad.r, H - pad.t - pad.b);
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  const tick = (v, log) => (log ? `1e${v.toFixed(1).replace(/\.0$/, "")}` : v.toPrecision(3));
  for (let i = 0; i <= 4; i++) {
    const vx = x0 + ((x1 - x0) * i) / 4;
    const vy = y0 + ((y1 - y0) * i) / 4;
    ctx.fillText(tick(vx, logX), px(vx) - 15, H - pad.b + 14);
    ctx.fillText(tick(vy, logY), 5, py(vy) + 4);
  }
  ctx.fillText(xLabel, W / 2 - 20, H - 8);
  ctx.fillText(yLabel, pad.l + 5, pad.t + 12);

  for (const r of refs) {
    ctx.strokeStyle = r.colour;
    ctx.setLineDash([5, 4]);
    ctx.beginPath();
    ctx.moveTo(pad.l, py(fy(r.y)));
    ctx.lineTo(W - pad.r, py(fy(r.y)));
    ctx.stroke();
    ctx.fillStyle = r.colour;
    ctx.fillText(r.label, W - pad.r - 90, py(fy(r.y)) - 4);
  }
  ctx.setLineDash([]);
  ctx.strokeStyle = "#1f5fa8";
  ctx.lineWidth = 2;
  ctx.beginPath();
  pts.forEach(([x, y], i) => {
    const [X, Y] = [px(fx(x)), py(fy(y))];
    i === 0 ? ctx.moveTo(X, Y) : ctx.lineTo(X, Y);
  });
  ctx.stroke();
  ctx.lineWidth = 1;
}

function guarded(statusId, f) {
  return () => {
    const status = $(statusId);
    status.className = "status";
    const t0 = performance.now();
    try {
      const msg = f();
      status.textContent = `${msg} (${(performance.now() - t0).toFixed(0)} ms)`;
    } catch (e) {
      status.className = "status error";
      status.textContent = String(e.message ?? e);
    }
  };
}

const runCurve = guarded("curve-status", () => {
  const witness = $("witness").value;
  const flat = exclusion_curve($("preset").value, witness, 1e-8, 1e-2, num("curve-n"));
  const pts = pairs(flat);
  plot($("curve-plot"), pts, { logX: true, logY: true, xLabel: "r_C (m)", yLabel: "λ_max (1/s)" });
  const finite = pts.filter(([, l]) => Number.isFinite(l));
  const best = finite.reduce((a, b) => (b[1] < a[1] ? b : a), finite[0] ?? [NaN, NaN]);
  return `tightest bound λ < ${best[1].toExponential(3)} s⁻¹ at r_C = ${best[0].toExponential(2)} m`;
});

const runTrace = guarded("trace-status", () => {
  const flat = squeezing_trace($("preset").value, num("trace-lambda"), num("trace-r"), num("trace-t"), 300);
  const pts = pairs(flat);
  const steady = white_steady_ratio($("preset").value, num("trace-lambda"), num("trace-r"));
  plot($("trace-plot"), pts, {
    xLabel: "t (s)",
    yLabel: "ν_min / (N/2)",
    refs: [
      { y: 1, label: "thermal", colour: "#999" },
      { y: steady, label: "steady state", colour: "#c60" },
    ],
  });
  const end = pts[pts.length - 1][1];
  return `final ν_min/(N/2) = ${end.toPrecision(5)}; steady state ${steady.toPrecision(5)}` +
    (steady < 1 ? " (squeezed)" : " (not squeezed)");
});

const runColoured = guarded("col-status", () => {
  const preset = $("preset").value;
  const [lambda, r] = [num("col-lambda"), num("col-r")];
  const pts = pairs(coloured_scan(preset, lambda, r, num("col-lo"), num("col-hi"), 200));
  const white = white_steady_ratio(preset, lambda, r);
  plot($("col-plot"), pts, {
    logX: true,
    xLabel: "Ω (rad/s)",
    yLabel: "σ_ZZ / (N/2)",
    refs: [
      { y: 1, label: "squeezing edge", colour: "#999" },
      { y: white, label: "white noise", colour: "#c60" },
    ],
  });
  const edge = pts.find(([, s]) => s >= 1);
  return edge
    ? `squeezing is lost once Ω ≳ ${edge[0].toExponential(2)} rad/s`
    : "squeezed over the whole range";
});

async function main() {
  await init();
  const select = $("preset");
  for (const name of preset_names()) {
    const o = document.createElement("option");
    o.value = o.textContent = name;
    select.appendChild(o);
  }
  $("curve-run").onclick = runCurve;
  $("trace-run").onclick = runTrace;
  $("col-run").onclick = runColoured;
  select.onchange = () => { runCurve(); runTrace(); runColoured(); };
  runCurve();
  runTrace();
  runColoured();
}

main();
