/**
 * Rate-distortion plotting: parse sweep CSVs and render an SVG figure with
 * one PSNR-vs-rate curve per method.
 *
 * The CSV contract is the sweep tool's exact column set; anything else is
 * rejected. Points are sorted by the chosen rate axis and never resampled
 * or interpolated. Rows whose PSNR is the infinite sentinel cannot be
 * placed on the dB axis and are dropped with a notice.
 */

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

export const RD_CSV_HEADER =
  "method,Q,gpp,bpp,psnr_db,q_ones,b_state,b_sign,b_aux,b_gpp,b_total,tc_nz,saturated";

export type RateAxis = "gpp" | "bpp";

export interface RDRow {
  method: string;
  q: number;
  gpp: number;
  bpp: number;
  psnrDb: number;
}

export interface RDPoint {
  rate: number;
  psnrDb: number;
  q: number;
}

export interface RDSeries {
  method: string;
  axis: RateAxis;
  points: RDPoint[]; // sorted ascending by rate
}

export interface SeriesResult {
  series: RDSeries[];
  notices: string[];
}

// ---------------------------------------------------------------------------
// CSV parsing
// ---------------------------------------------------------------------------

export function parseRdCsv(text: string): RDRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  if (lines[0] !== RD_CSV_HEADER) {
    throw new Error(`unexpected CSV header: ${JSON.stringify(lines[0])}`);
  }
  const columns = RD_CSV_HEADER.split(",").length;
  return lines.slice(1).map((line, i) => {
    const fields = line.split(",");
    if (fields.length !== columns) {
      throw new Error(`row ${i + 1}: expected ${columns} fields, got ${fields.length}`);
    }
    const num = (field: string, name: string): number => {
      if (field === "inf") return Infinity;
      const value = Number(field);
      if (!Number.isFinite(value)) {
        throw new Error(`row ${i + 1}: bad ${name} value ${JSON.stringify(field)}`);
      }
      return value;
    };
    return {
      method: fields[0],
      q: num(fields[1], "Q"),
      gpp: num(fields[2], "gpp"),
      bpp: num(fields[3], "bpp"),
      psnrDb: fields[4] === "inf" ? Infinity : num(fields[4], "psnr_db"),
    };
  });
}

export function formatRdCsv(rows: RDRow[]): string {
  // in-memory writer for the five columns this tool reads; budget columns
  // are zero-filled (round-trip oracle for the parser)
  const body = rows.map((r) =>
    [
      r.method,
      r.q,
      r.gpp,
      r.bpp,
      r.psnrDb === Infinity ? "inf" : r.psnrDb,
      0, 0, 0, 0, 0, 0, 0, 0,
    ].join(",")
  );
  return [RD_CSV_HEADER, ...body].join("\n") + "\n";
}

// ---------------------------------------------------------------------------
// Series assembly
// ---------------------------------------------------------------------------

export function buildSeries(rows: RDRow[], axis: RateAxis): SeriesResult {
  const notices: string[] = [];
  const byMethod = new Map<string, RDPoint[]>();
  for (const row of rows) {
    if (row.psnrDb === Infinity) {
      notices.push(`dropped ${row.method} Q=${row.q}: infinite PSNR sentinel`);
      continue;
    }
    const rate = axis === "gpp" ? row.gpp : row.bpp;
    if (!byMethod.has(row.method)) byMethod.set(row.method, []);
    byMethod.get(row.method)!.push({ rate, psnrDb: row.psnrDb, q: row.q });
  }
  const series: RDSeries[] = [];
  for (const [method, points] of byMethod) {
    points.sort((a, b) => a.rate - b.rate);
    series.push({ method, axis, points });
  }
  return { series, notices };
}

// ---------------------------------------------------------------------------
// SVG rendering
// ---------------------------------------------------------------------------

const AXIS_LABELS: Record<RateAxis, string> = {
  gpp: "gates per pixel (gpp)",
  bpp: "bits per pixel (bpp)",
};

const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#9d4edd", "#ff9f1c", "#495057"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 0.01; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function fmtTick(v: number): string {
  return Math.abs(v - Math.round(v)) < 1e-9 ? String(Math.round(v)) : v.toFixed(2);
}

export function renderSvg(seriesList: RDSeries[], axis: RateAxis): string {
  if (seriesList.length === 0) {
    throw new Error("nothing to plot: no finite points survived");
  }
  const allPoints = seriesList.flatMap((s) => s.points);
  if (allPoints.length === 0) {
    throw new Error("nothing to plot: no finite points survived");
  }

  const W = 640;
  const H = 420;
  const ml = 62;
  const mr = 16;
  const mt = 34;
  const mb = 52;
  const pw = W - ml - mr;
  const ph = H - mt - mb;

  const rates = allPoints.map((p) => p.rate);
  const psnrs = allPoints.map((p) => p.psnrDb);
  const xMin = Math.min(...rates, 0);
  const xMax = Math.max(...rates) * 1.06 || 1;
  const span = Math.max(...psnrs) - Math.min(...psnrs);
  const yMin = Math.min(...psnrs) - Math.max(span * 0.08, 1);
  const yMax = Math.max(...psnrs) + Math.max(span * 0.08, 1);
  const xOf = (v: number) => ml + ((v - xMin) / (xMax - xMin)) * pw;
  const yOf = (v: number) => mt + ph - ((v - yMin) / (yMax - yMin)) * ph;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ml}" y="${mt - 12}" font-size="13" font-weight="600" fill="#222">rate-distortion comparison</text>\n`;

  // Grid and ticks
  for (const v of niceTicks(yMin, yMax, 6)) {
    const y = yOf(v);
    s += `<line x1="${ml}" y1="${y.toFixed(1)}" x2="${ml + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${ml - 6}" y="${(y + 3).toFixed(1)}" font-size="9" text-anchor="end" fill="#555">${fmtTick(v)}</text>\n`;
  }
  for (const v of niceTicks(xMin, xMax, 7)) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${mt}" x2="${x.toFixed(1)}" y2="${mt + ph}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${mt + ph + 14}" font-size="9" text-anchor="middle" fill="#555">${fmtTick(v)}</text>\n`;
  }

  // Frame and axis labels
  s += `<rect x="${ml}" y="${mt}" width="${pw}" height="${ph}" fill="none" stroke="#999" stroke-width="1"/>\n`;
  s += `<text x="${ml + pw / 2}" y="${H - 14}" font-size="11" text-anchor="middle" fill="#222">${esc(AXIS_LABELS[axis])}</text>\n`;
  s += `<text x="16" y="${mt + ph / 2}" font-size="11" text-anchor="middle" fill="#222" transform="rotate(-90 16 ${mt + ph / 2})">PSNR (dB)</text>\n`;

  // Curves with per-point Q annotations
  seriesList.forEach((series, si) => {
    const color = PALETTE[si % PALETTE.length];
    const coords = series.points.map(
      (p) => `${xOf(p.rate).toFixed(1)},${yOf(p.psnrDb).toFixed(1)}`
    );
    if (coords.length > 1) {
      s += `<polyline fill="none" stroke="${color}" stroke-width="1.6" points="${coords.join(" ")}"/>\n`;
    }
    for (const p of series.points) {
      const x = xOf(p.rate);
      const y = yOf(p.psnrDb);
      s += `<circle cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="2.6" fill="${color}"/>\n`;
      s += `<text x="${(x + 4).toFixed(1)}" y="${(y - 4).toFixed(1)}" font-size="8" fill="${color}">Q=${p.q}</text>\n`;
    }
  });

  // Legend: labels are exactly the CSV method values
  seriesList.forEach((series, si) => {
    const color = PALETTE[si % PALETTE.length];
    const y = mt + 12 + si * 14;
    const x = ml + pw - 150;
    s += `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${color}" stroke-width="1.6"/>\n`;
    s += `<circle cx="${x + 11}" cy="${y}" r="2.6" fill="${color}"/>\n`;
    s += `<text x="${x + 28}" y="${y + 3}" font-size="10" fill="#222">${esc(series.method)}</text>\n`;
  });

  s += "</svg>\n";
  return s;
}
