import init, { oscillation_table, galaxy_partition, enumerate_counts } from "./pkg/coarsetop_web.js";

const $ = (id) => document.getElementById(id);

function showError(out, result, source) {
  let text = result.error;
  if (source !== undefined && result.offset !== undefined) {
    const col = [...source.slice(0, result.offset)].length;
    text += "\n" + source + "\n" + " ".repeat(col) + "^";
  }
  out.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = text;
  out.append(p);
}

function table(head, rows, cellClass) {
  const t = document.createElement("table");
  const tr = t.insertRow();
  for (const h of head) {
    const th = document.createElement("th");
    th.textContent = h;
    tr.append(th);
  }
  for (const row of rows) {
    const r = t.insertRow();
    row.forEach((v, i) => {
      const td = r.insertCell();
      td.textContent = v;
      if (cellClass) td.className = cellClass(v, i);
    });
  }
  return t;
}

function runOscillation(ev) {
  ev?.preventDefault();
  const expr = $("osc-expr").value;
  const out = $("osc-out");
  const res = JSON.parse(oscillation_table(
    expr, Number($("osc-width").value), Number($("osc-exp").value),
    Number($("osc-samples").value), Number($("osc-seed").value)));
  if (res.error) return showError(out, res, expr);
  out.innerHTML = "";
  const p = document.createElement("p");
  p.className = "verdict";
  p.textContent = `verdict: ${res.verdict}`;
  if (res.witness) p.textContent += ` (x = ${res.witness.x}, y = ${res.witness.y}, gap = ${res.witness.gap.toFixed(4)})`;
  if (res.reason) p.textContent += ` (${res.reason})`;
  out.append(p);
  const rows = res.widths.map((k, i) => [k, ...res.estimates[i].map((v) => v.toExponential(2))]);
  out.append(table(["k", ...res.radii.map((r) => "R=" + r.toExponential(0))], rows,
    (v, i) => (i === 0 ? "" : Number(v) <= 1e-3 ? "small" : Number(v) >= 1e-2 ? "large" : "")));
}

function runGalaxies(ev) {
  ev?.preventDefault();
  const out = $("gal-out");
  const res = JSON.parse(galaxy_partition($("gal-carrier").value, $("gal-gens").value));
  if (res.error) return showError(out, res);
  out.innerHTML = "";
  out.append(table(["galaxies", "connected", "bounded sets", "close pairs"],
    [[res.galaxies, res.connected, res.bounded_sets, res.closeness_pairs]]));
}

function runCounts(ev) {
  ev?.preventDefault();
  const out = $("enum-out");
  const res = JSON.parse(enumerate_counts(Number($("enum-n").value), $("enum-kind").value));
  if (res.error) return showError(out, res);
  out.innerHTML = "";
  out.append(table(["n", "families", "valid", "expected", "ok"],
    res.rows.map((r) => [r.n, r.families, r.valid, r.expected, r.ok])));
}

await init();
$("osc-form").addEventListener("submit", runOscillation);
$("gal-form").addEventListener("submit", runGalaxies);
$("enum-form").addEventListener("submit", runCounts);
runOscillation();
runGalaxies();
runCounts();
