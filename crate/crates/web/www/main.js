import init, { surface_profiles, potential_field, dispersion_curves } from "./pkg/shallowwave_web.js";

const $ = (id) => document.getElementById(id);
const mu = () => Math.pow(10, Number($("mu").value));

function axes(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#ddd";
  ctx.beginPath();
  ctx.moveTo(0, h / 2);
  ctx.lineTo(w, h / 2);
  ctx.stroke();
}

function line(ctx, ys, x0, x1, scale, mid, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ys.forEach((y, i) => {
    const x = x0 + ((x1 - x0) * i) / (ys.length - 1);
    const py = mid - y * scale;
    i === 0 ? ctx.moveTo(x, py) : ctx.lineTo(x, py);
  });
  ctx.stroke();
}

function drawProfiles() {
  const c = $("profiles");
  const ctx = c.getContext("2d");
  const n = 181;
  const v = surface_profiles(mu(), Number($("t").value), n);
  const water = v.subarray(0, n);
  const limit = v.subarray(n);
  const peak = Math.max(1e-9, ...v.map(Math.abs));
  axes(ctx, c.width, c.height);
  const scale = (0.45 * c.height) / peak;
  line(ctx, limit, 0, c.width, scale, c.height / 2, "#e8871e");
  line(ctx, water, 0, c.width, scale, c.height / 2, "#1f6fb2");
}

function drawField() {
  const c = $("field");
  const ctx = c.getContext("2d");
  const nx = 144;
  const ny = 48;
  const v = potential_field(mu(), nx, ny, Number($("vel").value));
  const lo = Math.min(...v);
  const hi = Math.max(...v);
  const img = ctx.createImageData(nx, ny);
  for (let j = 0; j < ny; j++) {
    for (let i = 0; i < nx; i++) {
      // rows come bottom first; the canvas is top first
      const s = (v[j * nx + i] - lo) / Math.max(hi - lo, 1e-12);
      const p = 4 * ((ny - 1 - j) * nx + i);
      img.data[p] = 255 * s;
      img.data[p + 1] = 80 + 120 * (1 - Math.abs(2 * s - 1));
      img.data[p + 2] = 255 * (1 - s);
      img.data[p + 3] = 255;
    }
  }
  const tmp = new OffscreenCanvas(nx, ny);
  tmp.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = true;
  ctx.drawImage(tmp, 0, 0, c.width, c.height);
}

function drawCurves() {
  const c = $("curves");
  const ctx = c.getContext("2d");
  const k = 100;
  const v = dispersion_curves(mu(), k);
  const ratio = [];
  const force = [];
  const lim = Math.sqrt(2 / Math.PI);
  for (let i = 1; i <= k; i++) {
    ratio.push(v[i] / i);
    force.push(v[k + 1 + i] / lim);
  }
  ctx.clearRect(0, 0, c.width, c.height);
  const half = c.width / 2 - 10;
  ctx.strokeStyle = "#ddd";
  ctx.strokeRect(0, 0, half, c.height);
  ctx.strokeRect(half + 20, 0, half, c.height);
  // both panels map [0, 1] in magnitude to the full height
  line(ctx, ratio, 0, half, c.height * 0.9, c.height * 0.95, "#1f6fb2");
  line(ctx, force.map((f) => -f), half + 20, c.width, c.height * 0.9, c.height * 0.95, "#1f6fb2");
}

function redraw() {
  $("mu-out").value = mu().toExponential(1);
  $("t-out").value = Number($("t").value).toFixed(1);
  $("vel-out").value = Number($("vel").value).toFixed(1);
  drawProfiles();
  drawField();
  drawCurves();
}

await init();
$("mu").addEventListener("input", redraw);
$("t").addEventListener("input", drawProfilesAndLabels);
$("vel").addEventListener("input", drawFieldAndLabels);
redraw();

function drawProfilesAndLabels() {
  $("t-out").value = Number($("t").value).toFixed(1);
  drawProfiles();
}

function drawFieldAndLabels() {
  $("vel-out").value = Number($("vel").value).toFixed(1);
  drawField();
}
