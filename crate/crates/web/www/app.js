import init, { generateTopology, analyzeTopology, analyzeCsv, fibreCurve } from "./pkg/optitopo_web.js";

const $ = (id) => document.getElementById(id);
let current = null; // last topology as JSON text

function status(msg, isError = false) {
  const s = $("status");
  s.textContent = msg;
  s.className = isError ? "error" : "";
}

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function drawMap(topology, flags) {
  const canvas = $("map");
  const ctx = clear(canvas);
  const pad = 24;
  const lats = topology.nodes.map((n) => n.lat);
  const lons = topology.nodes.map((n) => n.lon);
  const [lat0, lat1] = [Math.min(...lats), Math.max(...lats)];
  const [lon0, lon1] = [Math.min(...lons), Math.max(...lons)];
  // equirectangular, shrink longitude by cos(mean latitude)
  const k = Math.cos(((lat0 + lat1) / 2) * Math.PI / 180);
  const w = Math.max((lon1 - lon0) * k, 1e-9);
  const h = Math.max(lat1 - lat0, 1e-9);
  const scale = Math.min((canvas.width - 2 * pad) / w, (canvas.height - 2 * pad) / h);
  const xy = new Map(topology.nodes.map((n) => [
    n.id,
    [pad + (n.lon - lon0) * k * scale, canvas.height - pad - (n.lat - lat0) * scale],
  ]));
  const maxLen = Math.max(...topology.edges.map((e) => e.length_km));
  for (const e of topology.edges) {
    const [x0, y0] = xy.get(e.source);
    const [x1, y1] = xy.get(e.target);
    const t = e.length_km / maxLen;
    ctx.strokeStyle = `rgb(${Math.round(40 + 180 * t)}, 90, ${Math.round(200 - 150 * t)})`;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(x0, y0);
    ctx.lineTo(x1, y1);
    ctx.stroke();
  }
  ctx.fillStyle = "#222";
  for (const [x, y] of xy.values()) {
    ctx.beginPath();
    ctx.arc(x, y, 3.5, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.font = "12px system-ui";
  ctx.fillText(`${topology.nodes.length} nodes, ${topology.edges.length} links` +
    (flags ? `, planar: ${flags.is_planar}, biconnected: ${flags.is_biconnected}` : ""), 8, 14);
}

function bars(canvas, counts, xLabel) {
  const ctx = clear(canvas);
  const pad = 20;
  const top = Math.max(...counts, 1);
  const bw = (canvas.width - 2 * pad) / counts.length;
  ctx.fillStyle = "#3b6ea5";
  counts.forEach((c, i) => {
    const bh = (c / top) * (canvas.height - 2 * pad);
    ctx.fillRect(pad + i * bw + 1, canvas.height - pad - bh, Math.max(bw - 2, 1), bh);
  });
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  xLabel(ctx, pad, bw);
  ctx.fillText(`max ${top}`, pad, 12);
}

function showAnalysis(a) {
  const rows = Object.entries(a.metrics)
    .map(([k, v]) => `<tr><td>${k}</td><td>${Number.isInteger(v) ? v : v.toPrecision(5)}</td></tr>`)
    .join("");
  $("metrics").innerHTML = rows;
  bars($("wsd"), a.wsd_histogram, (ctx, pad, bw) => {
    for (const x of [0, 0.5, 1, 1.5, 2]) {
      ctx.fillText(String(x), pad + x * (a.wsd_bins / 2) * bw - 4, $("wsd").height - 5);
    }
  });
  bars($("degrees"), a.degree_histogram, (ctx, pad, bw) => {
    a.degree_histogram.forEach((_, d) => ctx.fillText(String(d), pad + d * bw + bw / 2 - 3, $("degrees").height - 5));
  });
}

function analyzeCurrent() {
  if (!current) return;
  try {
    showAnalysis(JSON.parse(analyzeTopology(current, $("scheme").value)));
  } catch (e) {
    status(String(e.message ?? e), true);
  }
}

function runGenerate() {
  const args = [+$("n").value, +$("d").value, $("region").value, +$("theta").value, +$("seed").value];
  try {
    const t0 = performance.now();
    const g = JSON.parse(generateTopology(...args));
    const ms = (performance.now() - t0).toFixed(1);
    current = JSON.stringify(g.topology);
    drawMap(g.topology, g.flags);
    status(`${g.topology.name}: ${g.grown_edges} grown + ${g.repair_edges} repair links (target ${g.edge_target}) in ${ms} ms`);
    analyzeCurrent();
  } catch (e) {
    status(String(e.message ?? e), true);
  }
}

function runCsv() {
  try {
    const a = JSON.parse(analyzeCsv($("nodesCsv").value, $("edgesCsv").value, $("scheme").value));
    current = JSON.stringify(a.topology);
    drawMap(a.topology, a.flags);
    showAnalysis(a);
    status("pasted topology analysed");
  } catch (e) {
    status(String(e.message ?? e), true);
  }
}

function drawFibre() {
  const max = +$("maxKm").value;
  $("maxKmLabel").textContent = max;
  const pts = JSON.parse(fibreCurve(max, 400));
  const canvas = $("fibre");
  const ctx = clear(canvas);
  const pad = 36;
  const yMax = pts[pts.length - 1].fibre_km;
  const X = (x) => pad + (x / max) * (canvas.width - 2 * pad);
  const Y = (y) => canvas.height - pad - (y / yMax) * (canvas.height - 2 * pad);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.moveTo(X(0), Y(0));
  ctx.lineTo(X(max), Y(Math.min(max, yMax)));
  ctx.stroke();
  ctx.strokeStyle = "#c0392b";
  ctx.lineWidth = 2;
  ctx.beginPath();
  pts.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, X(p.haversine_km), Y(p.fibre_km)));
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "11px system-ui";
  ctx.fillText("great-circle km", canvas.width - pad - 80, canvas.height - 8);
  ctx.fillText(`fibre km (max ${Math.round(yMax)})`, 4, 14);
  ctx.fillText("grey: fibre = great circle", pad + 6, 30);
}

await init();
$("generate").onclick = runGenerate;
$("reseed").onclick = () => { $("seed").value = +$("seed").value + 1; runGenerate(); };
$("analyzeCsv").onclick = runCsv;
$("scheme").onchange = analyzeCurrent;
$("maxKm").oninput = drawFibre;
drawFibre();
runGenerate();
