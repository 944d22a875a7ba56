import init, { beamstateMap, beamstateReport, steerCut, gratingLimits } from "./pkg/beamswitch_web.js";

const $ = (id) => document.getElementById(id);
const FLOOR = -40;

function color(db) {
  // dark blue at the floor to yellow at the peak
  const t = Math.min(1, Math.max(0, (db - FLOOR) / -FLOOR));
  return [Math.round(255 * t), Math.round(40 + 200 * t), Math.round(120 * (1 - t))];
}

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

function drawMap() {
  const canvas = $("uv");
  const n = canvas.width;
  const state = $("state").value;
  const freq = Number($("freq").value);
  const gain = Number($("gain").value);
  $("freq-out").textContent = freq.toFixed(1);
  try {
    const map = beamstateMap(state, freq, gain, n);
    const ctx = canvas.getContext("2d");
    const img = ctx.createImageData(n, n);
    for (let i = 0; i < n * n; i++) {
      const v = map[i];
      const [r, g, b] = Number.isNaN(v) ? [255, 255, 255] : color(v);
      img.data.set([r, g, b, 255], 4 * i);
    }
    ctx.putImageData(img, 0, 0);
    const report = JSON.parse(beamstateReport(state, freq, gain));
    const peaks = report.peaks
      .map((p) => `θ ${p.theta_deg.toFixed(1)}°  φ ${p.phi_deg.toFixed(1)}°  ${p.level_db.toFixed(2)} dB`)
      .join("\n");
    $("report").textContent =
      `${report.peaks.length} peak(s)\n${peaks}\n\n` +
      `directivity ${report.directivity_dbi.toFixed(2)} dBi\n` +
      `front/back ${report.front_to_back_db.toFixed(1)} dB\n` +
      `grating ${report.grating.verdict}`;
    showError();
  } catch (e) {
    showError(e);
  }
}

function drawCut() {
  const canvas = $("cut");
  const ctx = canvas.getContext("2d");
  const dphi = Number($("dphi").value);
  $("dphi-out").textContent = dphi;
  let cut;
  try {
    cut = steerCut(Number($("n").value), Number($("d").value), dphi, 0);
    showError();
  } catch (e) {
    showError(e);
    return;
  }
  const w = canvas.width, h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#ddd";
  for (const a of [-90, -60, -30, 0, 30, 60, 90]) {
    const x = ((a + 90) / 180) * w;
    ctx.beginPath(); ctx.moveTo(x, 0); ctx.lineTo(x, h); ctx.stroke();
    ctx.fillStyle = "#888";
    ctx.fillText(`${a}°`, Math.min(x + 2, w - 24), h - 4);
  }
  ctx.strokeStyle = "#1a5fb4";
  ctx.beginPath();
  cut.forEach((db, i) => {
    const x = (i / (cut.length - 1)) * w;
    const y = (db / FLOOR) * (h - 16);
    i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
  });
  ctx.stroke();
}

function grating() {
  try {
    const [analytic, scanned] = gratingLimits(Number($("gd").value));
    $("grating-out").textContent =
      `analytic ${analytic.toFixed(2)}°, brute-force scan ${scanned.toFixed(2)}° (5 elements)`;
    showError();
  } catch (e) {
    showError(e);
  }
}

await init();
for (const id of ["state", "freq", "gain"]) $(id).addEventListener("input", drawMap);
for (const id of ["n", "d", "dphi"]) $(id).addEventListener("input", drawCut);
$("grating-go").addEventListener("click", grating);
drawMap();
drawCut();
grating();
