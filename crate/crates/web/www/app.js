import init, { build, decideFormula, solutionGrid } from "./pkg/pdwa_web.js";

const $ = (id) => document.getElementById(id);
const formula = () => $("formula").value;
const base = () => Number($("base").value);

function el(tag, text, cls) {
  const e = document.createElement(tag);
  if (text !== undefined) e.textContent = text;
  if (cls) e.className = cls;
  return e;
}

// Parses a binding's JSON reply; renders the error and returns null on failure.
function reply(json, out) {
  const r = JSON.parse(json);
  out.replaceChildren();
  if (!r.ok) {
    out.append(el("p", r.error, "error"));
    return null;
  }
  return r;
}

function onBuild() {
  const out = $("build-out");
  const r = reply(build(formula(), base()), out);
  if (!r) return;
  const tracks = r.tracks.length ? r.tracks.join(", ") : "none";
  out.append(el("p", `${r.states} states over tracks: ${tracks}`));
  out.append(el("p", r.witness === null ? "unsatisfiable" : `witness: ${r.witness}`));
  out.append(el("pre", r.bounds.join("\n")));
  const link = el("a", "download DOT");
  link.href = URL.createObjectURL(new Blob([r.dot], { type: "text/vnd.graphviz" }));
  link.download = "automaton.dot";
  out.append(link, el("pre", r.dot));
}

function onDecide() {
  const out = $("decide-out");
  const r = reply(decideFormula(formula(), base(), $("engine").value), out);
  if (!r) return;
  if (r.sentence) {
    const p = el("p", "Truth value: ");
    p.append(el("span", r.result ? "TRUE" : "FALSE"));
    p.lastChild.id = "truth";
    out.append(p);
  } else {
    out.append(el("p", "Not a sentence: showing the quantifier-free equivalent only."));
  }
  out.append(el("pre", r.qe));
}

function onGrid() {
  const out = $("grid-out");
  const canvas = $("canvas");
  const r = reply(solutionGrid(formula(), base(), Number($("radius").value)), out);
  if (!r) {
    canvas.width = canvas.height = 0;
    return;
  }
  const n = r.rows[0].length;
  const cell = Math.max(4, Math.floor(480 / n));
  canvas.width = n * cell;
  canvas.height = r.rows.length * cell;
  const ctx = canvas.getContext("2d");
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  r.rows.forEach((row, j) =>
    row.forEach((hit, i) => {
      if (!hit) return;
      ctx.fillStyle = "#1565c0";
      ctx.fillRect(i * cell, j * cell, cell, cell);
    }),
  );
  // axes through 0
  ctx.strokeStyle = "#999";
  const mid = r.radius * cell + cell / 2;
  ctx.beginPath();
  ctx.moveTo(mid, 0);
  ctx.lineTo(mid, canvas.height);
  if (r.rows.length > 1) {
    ctx.moveTo(0, mid);
    ctx.lineTo(canvas.width, mid);
  }
  ctx.stroke();
  const count = r.rows.flat().filter(Boolean).length;
  const axes = r.vars.length === 2 ? `${r.vars[0]} across, ${r.vars[1]} up` : `${r.vars[0] ?? "no variable"} across`;
  out.append(el("p", `${count} solutions in range, ${axes}, ${r.states} states`));
}

await init();
$("build").addEventListener("click", onBuild);
$("decide").addEventListener("click", onDecide);
$("grid").addEventListener("click", onGrid);
