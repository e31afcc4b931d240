import init, { polygon_h_to_v, polygon_v_to_h, cone_trace } from "./pkg/polycone_demo.js";

const SPAN = 5;
const FAR = 1e3;

const $ = (id) => document.getElementById(id);

function view(canvas) {
  const ctx = canvas.getContext("2d");
  const s = canvas.width / (2 * SPAN);
  const px = ([x, y]) => [(x + SPAN) * s, (SPAN - y) * s];
  const world = (cx, cy) => [cx / s - SPAN, SPAN - cy / s];
  return { ctx, px, world, w: canvas.width, h: canvas.height };
}

function axes(v) {
  const { ctx, px, w, h } = v;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#eee";
  for (let k = -SPAN; k <= SPAN; k++) {
    line(v, [k, -SPAN], [k, SPAN]);
    line(v, [-SPAN, k], [SPAN, k]);
  }
  ctx.strokeStyle = "#999";
  line(v, [-SPAN, 0], [SPAN, 0]);
  line(v, [0, -SPAN], [0, SPAN]);
}

function line(v, a, b) {
  const [ax, ay] = v.px(a);
  const [bx, by] = v.px(b);
  v.ctx.beginPath();
  v.ctx.moveTo(ax, ay);
  v.ctx.lineTo(bx, by);
  v.ctx.stroke();
}

function dot(v, p, color) {
  const [x, y] = v.px(p);
  v.ctx.fillStyle = color;
  v.ctx.beginPath();
  v.ctx.arc(x, y, 4, 0, 2 * Math.PI);
  v.ctx.fill();
}

// Andrew's monotone chain.
function hull(points) {
  const pts = [...points].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  if (pts.length < 3) return pts;
  const cross = (o, a, b) => (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  const half = (list) => {
    const out = [];
    for (const p of list) {
      while (out.length >= 2 && cross(out[out.length - 2], out[out.length - 1], p) <= 0) out.pop();
      out.push(p);
    }
    out.pop();
    return out;
  };
  return half(pts).concat(half(pts.reverse()));
}

// conv(points) + cone(rays), clipped by the canvas.
function region(v, points, rays, fill) {
  const cloud = points.flatMap((p) => [p, ...rays.map((r) => [p[0] + FAR * r[0], p[1] + FAR * r[1]])]);
  const poly = hull(cloud);
  v.ctx.fillStyle = fill;
  v.ctx.strokeStyle = "#246";
  v.ctx.beginPath();
  poly.forEach((p, i) => {
    const [x, y] = v.px(p);
    i ? v.ctx.lineTo(x, y) : v.ctx.moveTo(x, y);
  });
  v.ctx.closePath();
  v.ctx.fill();
  if (poly.length > 1) v.ctx.stroke();
}

function boundaries(v, rows) {
  v.ctx.strokeStyle = "#d88";
  for (const [a1, a2, b] of rows) {
    if (Math.abs(a2) > Math.abs(a1)) {
      line(v, [-SPAN, (b + a1 * SPAN) / a2], [SPAN, (b - a1 * SPAN) / a2]);
    } else if (a1 !== 0) {
      line(v, [(b + a2 * SPAN) / a1, -SPAN], [(b - a2 * SPAN) / a1, SPAN]);
    }
  }
}

function show(id, f) {
  const out = $(id);
  out.classList.remove("error");
  try {
    return f();
  } catch (e) {
    out.textContent = String(e);
    out.classList.add("error");
    return null;
  }
}

function drawPolygon(canvasId, doc) {
  const v = view($(canvasId));
  axes(v);
  const points = doc.points.map((p) => p.approx);
  const rays = doc.rays.map((r) => r.approx);
  if (points.length) region(v, points, rays, "rgba(70, 130, 200, 0.3)");
  boundaries(v, doc.inequalities.map((r) => r.approx));
  points.forEach((p) => dot(v, p, "#124"));
}

function runHrep() {
  show("hrep-out", () => {
    const doc = JSON.parse(polygon_h_to_v($("hrep").value));
    drawPolygon("hrep-canvas", doc);
    $("hrep-out").textContent = doc.text;
  });
}

function runVrep() {
  show("vrep-out", () => {
    const doc = JSON.parse(polygon_v_to_h($("vrep").value));
    drawPolygon("vrep-canvas", doc);
    $("vrep-out").textContent = doc.text;
  });
}

function vrepRows() {
  const rows = $("vrep").value.split("\n").map((l) => l.split("#")[0].trim()).filter(Boolean);
  const [, , nv, nw] = rows[0].split(/\s+/).map(Number);
  return { points: rows.slice(1, 1 + nv), rays: rows.slice(1 + nv, 1 + nv + nw) };
}

function addPoint(ev) {
  const canvas = $("vrep-canvas");
  const rect = canvas.getBoundingClientRect();
  const [x, y] = view(canvas).world(ev.clientX - rect.left, ev.clientY - rect.top);
  const snap = (t) => {
    const h = Math.round(t * 2);
    return h % 2 === 0 ? String(h / 2) : `${h}/2`;
  };
  let rows = { points: [], rays: [] };
  try {
    rows = vrepRows();
  } catch (_) {}
  rows.points.push(`${snap(x)} ${snap(y)}`);
  $("vrep").value = [`V-rep 2 ${rows.points.length} ${rows.rays.length}`, ...rows.points, ...rows.rays].join("\n");
  runVrep();
}

function treeItem(node) {
  const li = document.createElement("li");
  const rows = `ineq [${node.inequality_rows}] eq [${node.equation_rows}]`;
  li.textContent = node.z
    ? `split on z = (${node.z.join(", ")}), ${rows}`
    : `${node.case}: ${node.generators} generators, ${rows}`;
  if (node.children.length) {
    const ul = document.createElement("ul");
    node.children.forEach((c) => ul.appendChild(treeItem(c)));
    li.appendChild(ul);
  }
  return li;
}

function runCone() {
  show("cone-out", () => {
    const doc = JSON.parse(cone_trace($("cone").value));
    const s = doc.stats;
    $("cone-out").textContent =
      `${doc.text}\ncertificate: ${doc.verified ? "PASS" : "FAIL"}\n` +
      `nodes ${s.nodes}, leaves ${s.leaves}, depth ${s.max_depth}, emitted ${s.emitted}, kept ${s.output_size}`;
    const tree = $("cone-tree");
    tree.replaceChildren(treeItem(doc.trace));
    const v = view($("cone-canvas"));
    axes(v);
    if (doc.dim === 2) {
      const gens = doc.generators.map((g) => g.approx);
      region(v, [[0, 0]], gens, "rgba(90, 170, 90, 0.3)");
      v.ctx.strokeStyle = "#262";
      gens.forEach((g) => {
        const len = Math.hypot(g[0], g[1]);
        line(v, [0, 0], [(4 * g[0]) / len, (4 * g[1]) / len]);
      });
    }
  });
}

await init();
$("hrep-go").onclick = runHrep;
$("vrep-go").onclick = runVrep;
$("vrep-clear").onclick = () => {
  $("vrep").value = "V-rep 2 0 0";
  axes(view($("vrep-canvas")));
  $("vrep-out").textContent = "";
};
$("vrep-canvas").onclick = addPoint;
$("cone-go").onclick = runCone;
runHrep();
runVrep();
runCone();
