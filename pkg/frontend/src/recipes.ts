/**
 * Figure recipes: which dataset feeds which panel layout, and the
 * render entry point that stamps a checksum of the input data into the
 * image metadata.  Rendering never recomputes physics; it only reads the
 * exported files.
 */

import { createHash } from 'crypto'
import { readFileSync, writeFileSync } from 'fs'
import { basename, join } from 'path'

import {
  HistogramPanel, PALETTE, renderCurves, renderHistogramPairs, renderMap,
  Series, seriesFromRows,
} from './plots.js'
import { renderPng } from './raster.js'
import { Dataset, expectSchema, levels, loadDataset, num, Row,
  SchemaError } from './schema.js'
import type { Scene } from './scene.js'
import { renderSvg } from './svg.js'

export type FigureKind = 'spectra' | 'g2-curves' | 'g2-map'
  | 'switch-curve' | 'histogram-pair'

export interface FigureRecipe {
  name: string
  kind: FigureKind
  input: string
  build: (data: Dataset) => Scene
}

const MRAD = 1e6   // detuning axis unit [rad/s]
const KRAD = 1e3   // spin axis unit [rad/s]

const X_DETUNING = 'DETUNING [1E6 RAD/S]'
const X_SPIN = 'SPIN RATE [1E3 RAD/S]'

function omegaLabel(omega: number): string {
  return `OMEGA=${Math.round(omega / KRAD)}K`
}

function rowsAt(rows: Row[], column: string, value: number): Row[] {
  return rows.filter((r) => num(r, column) === value)
}

function buildSpectra(data: Dataset): Scene {
  expectSchema(data, 'sweep-v1')
  const omegas = levels(data.rows, 'omega')
  const series: Series[] = []
  omegas.forEach((omega, i) => {
    const rows = rowsAt(data.rows, 'omega', omega)
    const color = PALETTE[i % PALETTE.length]
    series.push({ ...seriesFromRows(rows, 'delta0', 's_cw', MRAD), color,
      label: `S CW ${omegaLabel(omega)}` })
    series.push({ ...seriesFromRows(rows, 'delta0', 's_ccw', MRAD), color,
      dash: [6, 4], label: `S CCW ${omegaLabel(omega)}` })
  })
  return renderCurves(series, { xLabel: X_DETUNING, yLabel: 'S',
    title: 'EXCITATION SPECTRA', logY: false })
}

function markerSeries(rows: Row[], yColumn: string):
    { x: number[]; y: number[] } {
  return seriesFromRows(rows, 'delta0', yColumn, MRAD)
}

function buildChiralG2(data: Dataset): Scene {
  expectSchema(data, 'sweep-v1')
  const omegas = levels(data.rows, 'omega')
  const staticRows = rowsAt(data.rows, 'omega', omegas[0])
  const spinRows = rowsAt(data.rows, 'omega', omegas[omegas.length - 1])
  const spinLabel = omegaLabel(omegas[omegas.length - 1])
  const series: Series[] = [
    { ...seriesFromRows(staticRows, 'delta0', 'g2_cw', MRAD),
      color: '#555555', dash: [6, 4], label: 'G2 STATIC' },
    { ...seriesFromRows(spinRows, 'delta0', 'g2_cw', MRAD),
      color: PALETTE[0], label: `G2 CW ${spinLabel}`,
      markers: markerSeries(spinRows, 'g2_analytic_cw') },
    { ...seriesFromRows(spinRows, 'delta0', 'g2_ccw', MRAD),
      color: PALETTE[1], label: `G2 CCW ${spinLabel}`,
      markers: markerSeries(spinRows, 'g2_analytic_ccw') },
  ]
  return renderCurves(series, { xLabel: X_DETUNING, yLabel: 'G2(0)',
    title: 'CHIRAL PHOTON CORRELATIONS', logY: true, refY: 1,
    yDomain: [1e-3, 1e3] })
}

function buildCcwOrders(data: Dataset): Scene {
  expectSchema(data, 'sweep-v1')
  const series: Series[] = [
    { ...seriesFromRows(data.rows, 'delta0', 'g2_ccw', MRAD),
      color: PALETTE[0], label: 'G2 CCW',
      markers: markerSeries(data.rows, 'g2_analytic_ccw') },
    { ...seriesFromRows(data.rows, 'delta0', 'g3_ccw', MRAD),
      color: PALETTE[1], dash: [6, 4], label: 'G3 CCW',
      markers: markerSeries(data.rows, 'g3_analytic_ccw') },
  ]
  return renderCurves(series, { xLabel: X_DETUNING, yLabel: 'G(N)(0)',
    title: 'COUNTER-PROPAGATING MODE CORRELATIONS', logY: true, refY: 1,
    yDomain: [1e-3, 1e3] })
}

function buildBackscatterFamily(data: Dataset): Scene {
  expectSchema(data, 'sweep-v1')
  const js = levels(data.rows, 'J')
  const gamma = num(data.rows[0], 'chi')! / 9.5
  const series: Series[] = js.map((j, i) => ({
    ...seriesFromRows(rowsAt(data.rows, 'J', j), 'delta0', 'g2_cw', MRAD),
    color: PALETTE[i % PALETTE.length],
    label: `J/GAMMA=${Math.round(j / gamma)}`,
  }))
  return renderCurves(series, { xLabel: X_DETUNING, yLabel: 'G2(0)',
    title: 'STATIC RESONATOR VS BACKSCATTERING', logY: true, refY: 1,
    yDomain: [1e-3, 1e3] })
}

function buildRevival(data: Dataset): Scene {
  expectSchema(data, 'sweep-v1')
  const js = levels(data.rows, 'J')
  const jMax = js[js.length - 1]
  const omegas = levels(data.rows, 'omega')
  const series: Series[] = []
  omegas.forEach((omega, i) => {
    const color = PALETTE[i % PALETTE.length]
    const coupled = data.rows.filter((r) => num(r, 'omega') === omega
      && num(r, 'J') === jMax)
    const ideal = data.rows.filter((r) => num(r, 'omega') === omega
      && num(r, 'J') === 0)
    series.push({ ...seriesFromRows(coupled, 'delta0', 'g2_cw', MRAD),
      color, label: `${omegaLabel(omega)} J>0` })
    series.push({ ...seriesFromRows(ideal, 'delta0', 'g2_cw', MRAD),
      color, dash: [2, 3], label: `${omegaLabel(omega)} J=0` })
  })
  return renderCurves(series, { xLabel: X_DETUNING, yLabel: 'G2(0)',
    title: 'SPIN-INDUCED REVIVAL OF BLOCKADE', logY: true, refY: 1,
    yDomain: [1e-3, 1e3] })
}

function buildMap(data: Dataset): Scene {
  expectSchema(data, 'sweep-v1')
  return renderMap(data.rows, 'delta0', 'omega', 'g2_cw', MRAD, KRAD, {
    xLabel: X_DETUNING, yLabel: X_SPIN, title: 'G2 CW MAP',
    colorLabel: 'LOG10 G2', logRange: [-2.5, 1.5] })
}

function buildSwitch(data: Dataset): Scene {
  expectSchema(data, 'sweep-v1')
  const x = (rows: Row[], column: string) =>
    seriesFromRows(rows, 'omega', column, KRAD)
  const series: Series[] = [
    { ...x(data.rows, 'g2_cw'), color: PALETTE[0], label: 'G2 CW',
      markers: x(data.rows, 'g2_analytic_cw') },
    { ...x(data.rows, 'g3_cw'), color: PALETTE[1], dash: [6, 4],
      label: 'G3 CW', markers: x(data.rows, 'g3_analytic_cw') },
  ]
  return renderCurves(series, { xLabel: X_SPIN, yLabel: 'G(N)(0)',
    title: 'BLOCKADE SWITCH VS SPIN RATE', logY: true, refY: 1,
    yDomain: [1e-5, 1e3] })
}

function buildHistograms(data: Dataset): Scene {
  expectSchema(data, 'hist-v1')
  const groups = new Map<string, Row[]>()
  for (const row of data.rows) {
    const key = `${row.mode}|${row.delta0}|${row.omega}`
    if (!groups.has(key)) groups.set(key, [])
    groups.get(key)!.push(row)
  }
  const panels: HistogramPanel[] = [...groups.entries()].map(
    ([, rows]) => {
      const sorted = [...rows].sort((a, b) => num(a, 'k')! - num(b, 'k')!)
      const mode = String(sorted[0].mode).toUpperCase()
      const delta0 = num(sorted[0], 'delta0')! / MRAD
      const omega = num(sorted[0], 'omega')! / KRAD
      return {
        title: `${mode} D0=${Math.round(delta0 * 100) / 100} ` +
          `OM=${Math.round(omega)}K`,
        k: sorted.map((r) => num(r, 'k')!),
        p: sorted.map((r) => num(r, 'p')!),
        poisson: sorted.map((r) => num(r, 'poisson')!),
      }
    })
  return renderHistogramPairs(panels, 'PROBABILITY')
}

const BUILDERS: Record<string, { kind: FigureKind;
                                 build: (d: Dataset) => Scene }> = {
  fig1b: { kind: 'spectra', build: buildSpectra },
  fig2a: { kind: 'g2-curves', build: buildChiralG2 },
  fig2b: { kind: 'g2-curves', build: buildCcwOrders },
  fig2c: { kind: 'histogram-pair', build: buildHistograms },
  fig3a: { kind: 'g2-curves', build: buildBackscatterFamily },
  fig3b: { kind: 'g2-curves', build: buildRevival },
  fig3c: { kind: 'g2-map', build: buildMap },
  fig3d: { kind: 'switch-curve', build: buildSwitch },
  fig3e: { kind: 'histogram-pair', build: buildHistograms },
}

export const FIGURE_NAMES = Object.keys(BUILDERS).sort()

export function recipeFor(name: string, dataDir: string): FigureRecipe {
  const entry = BUILDERS[name]
  if (!entry) {
    throw new SchemaError(`unknown figure ${JSON.stringify(name)}; ` +
      `expected one of ${FIGURE_NAMES.join(', ')}`)
  }
  return { name, kind: entry.kind, build: entry.build,
    input: join(dataDir, `${name}_figure-data.csv`) }
}

/** Load a recipe file: {"name": "fig2a", "input": "path/to/data.csv"};
 * the optional "kind" must match the figure's registered kind. */
export function recipeFromFile(path: string): FigureRecipe {
  let doc: { name?: unknown; input?: unknown; kind?: unknown }
  try {
    doc = JSON.parse(readFileSync(path, 'utf8'))
  } catch (err) {
    throw new SchemaError(
      `cannot parse recipe ${path}: ${(err as Error).message}`)
  }
  if (typeof doc.name !== 'string' || typeof doc.input !== 'string') {
    throw new SchemaError("recipe needs string 'name' and 'input' fields")
  }
  const entry = BUILDERS[doc.name]
  if (!entry) {
    throw new SchemaError(`unknown figure ${JSON.stringify(doc.name)}`)
  }
  if (doc.kind !== undefined && doc.kind !== entry.kind) {
    throw new SchemaError(`recipe kind ${JSON.stringify(doc.kind)} does ` +
      `not match the registered kind ${JSON.stringify(entry.kind)}`)
  }
  return { name: doc.name, kind: entry.kind, build: entry.build,
    input: doc.input }
}

export interface RenderedFigure {
  png: string
  svg: string
  checksum: string
}

export function render(recipe: FigureRecipe, outDir: string):
    RenderedFigure {
  const data = loadDataset(recipe.input)
  const scene = recipe.build(data)
  const checksum = createHash('sha256').update(data.bytes).digest('hex')
  scene.metadata['source-checksum'] = checksum
  scene.metadata['source-file'] = basename(recipe.input)
  scene.metadata['figure'] = recipe.name
  scene.metadata['kind'] = recipe.kind
  const pngPath = join(outDir, `${recipe.name}.png`)
  const svgPath = join(outDir, `${recipe.name}.svg`)
  writeFileSync(pngPath, renderPng(scene))
  writeFileSync(svgPath, renderSvg(scene))
  return { png: pngPath, svg: svgPath, checksum }
}
