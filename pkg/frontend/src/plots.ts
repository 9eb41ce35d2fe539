/**
 * The five figure kinds, each turning parsed rows into a scene:
 * spectra curves, correlation curves (log-y, optional closed-form
 * markers), a 2D correlation map, the spin switch curve, and paired
 * photon-number histograms.
 */

import type { Row } from './schema.js'
import { num } from './schema.js'
import type { Scene } from './scene.js'
import { makeScene } from './scene.js'
import {
  clampLog, drawAxes, drawLegend, fmtTick, linearScale, LegendEntry,
  logScale, niceTicks, PanelBox, Scale,
} from './scales.js'

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd',
  '#ff7f0e', '#17becf']

const WIDTH = 840
const HEIGHT = 560
const BOX: PanelBox = { x0: 86, y0: 40, x1: WIDTH - 30, y1: HEIGHT - 64 }

export interface Series {
  x: number[]
  y: number[]
  color: string
  width?: number
  dash?: number[]
  label?: string
  /** closed-form values drawn as open circles (subsampled) */
  markers?: { x: number[]; y: number[] }
}

export interface CurveOptions {
  xLabel: string
  yLabel: string
  title?: string
  logY: boolean
  yDomain?: [number, number]
  /** horizontal reference line (e.g. the classical boundary g = 1) */
  refY?: number
}

function finitePairs(xs: Array<number | null>, ys: Array<number | null>):
    { x: number[]; y: number[] } {
  const x: number[] = []
  const y: number[] = []
  for (let i = 0; i < xs.length; i++) {
    const xv = xs[i]
    const yv = ys[i]
    if (xv !== null && yv !== null && Number.isFinite(xv)
        && Number.isFinite(yv)) {
      x.push(xv)
      y.push(yv)
    }
  }
  return { x, y }
}

export function seriesFromRows(rows: Row[], xColumn: string,
                               yColumn: string, xUnit = 1): { x: number[];
                                                              y: number[] } {
  const { x, y } = finitePairs(rows.map((r) => num(r, xColumn)),
                               rows.map((r) => num(r, yColumn)))
  return { x: x.map((v) => v / xUnit), y }
}

function yExtent(series: Series[], logY: boolean): [number, number] {
  let lo = Infinity
  let hi = -Infinity
  for (const s of series) {
    for (const v of s.y) {
      if (logY && v <= 0) continue
      lo = Math.min(lo, v)
      hi = Math.max(hi, v)
    }
  }
  if (!Number.isFinite(lo)) { lo = logY ? 1e-3 : 0; hi = 1 }
  if (logY) {
    return [Math.pow(10, Math.floor(Math.log10(lo))),
            Math.pow(10, Math.ceil(Math.log10(hi)))]
  }
  return [0, hi * 1.06 || 1]
}

export function renderCurves(series: Series[],
                             options: CurveOptions): Scene {
  const scene = makeScene(WIDTH, HEIGHT)
  const xLo = Math.min(...series.map((s) => Math.min(...s.x)))
  const xHi = Math.max(...series.map((s) => Math.max(...s.x)))
  const xScale = linearScale([xLo, xHi], [BOX.x0, BOX.x1])
  const yDomain = options.yDomain ?? yExtent(series, options.logY)
  const yScale = options.logY ? logScale(yDomain, [BOX.y1, BOX.y0])
    : linearScale(yDomain, [BOX.y1, BOX.y0])
  drawAxes(scene, BOX, xScale, yScale, options)
  if (options.refY !== undefined) {
    scene.shapes.push({ kind: 'line', stroke: '#9a9a9a', width: 1,
      dash: [5, 4],
      pts: [[BOX.x0, yScale(options.refY)], [BOX.x1, yScale(options.refY)]] })
  }
  const legend: LegendEntry[] = []
  for (const s of series) {
    const pts: Array<[number, number]> = []
    for (let i = 0; i < s.x.length; i++) {
      const y = options.logY ? clampLog(s.y[i], yDomain) : s.y[i]
      if (options.logY && s.y[i] <= 0) continue
      pts.push([xScale(s.x[i]), yScale(y)])
    }
    if (pts.length > 1) {
      scene.shapes.push({ kind: 'line', stroke: s.color,
        width: s.width ?? 1.8, dash: s.dash, pts })
    }
    if (s.markers) {
      const stride = Math.max(1, Math.floor(s.markers.x.length / 30))
      for (let i = 0; i < s.markers.x.length; i += stride) {
        const v = s.markers.y[i]
        if (options.logY && v <= 0) continue
        scene.shapes.push({ kind: 'circle', cx: xScale(s.markers.x[i]),
          cy: yScale(options.logY ? clampLog(v, yDomain) : v), r: 3.2,
          stroke: s.color, width: 1.4 })
      }
    }
    if (s.label) {
      legend.push({ label: s.label, color: s.color, dash: s.dash,
        marker: Boolean(s.markers) })
    }
  }
  if (legend.length) drawLegend(scene, BOX, legend)
  return scene
}

// --- 2D map ----------------------------------------------------------------

const VIRIDIS: Array<[number, number, number]> = [
  [68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98],
  [253, 231, 37],
]

function viridis(t: number): string {
  const clamped = Math.min(1, Math.max(0, t))
  const pos = clamped * (VIRIDIS.length - 1)
  const i = Math.min(VIRIDIS.length - 2, Math.floor(pos))
  const f = pos - i
  const channel = (k: number) =>
    Math.round(VIRIDIS[i][k] + f * (VIRIDIS[i + 1][k] - VIRIDIS[i][k]))
  return '#' + [0, 1, 2].map((k) =>
    channel(k).toString(16).padStart(2, '0')).join('')
}

export interface MapOptions {
  xLabel: string
  yLabel: string
  title?: string
  colorLabel: string
  /** log10 range of the colored quantity */
  logRange: [number, number]
}

export function renderMap(rows: Row[], xColumn: string, yColumn: string,
                          valueColumn: string, xUnit: number, yUnit: number,
                          options: MapOptions): Scene {
  const scene = makeScene(WIDTH, HEIGHT)
  const box: PanelBox = { ...BOX, x1: WIDTH - 110 }
  const xs = [...new Set(rows.map((r) => num(r, xColumn) ?? NaN))]
    .sort((a, b) => a - b)
  const ys = [...new Set(rows.map((r) => num(r, yColumn) ?? NaN))]
    .sort((a, b) => a - b)
  const xScale = linearScale([xs[0] / xUnit, xs[xs.length - 1] / xUnit],
                             [box.x0, box.x1])
  const yScale = linearScale([ys[0] / yUnit, ys[ys.length - 1] / yUnit],
                             [box.y1, box.y0])
  const xStep = (box.x1 - box.x0) / (xs.length - 1)
  const yStep = (box.y1 - box.y0) / (ys.length - 1)
  const [lo, hi] = options.logRange
  for (const row of rows) {
    const x = num(row, xColumn)
    const y = num(row, yColumn)
    const v = num(row, valueColumn)
    if (x === null || y === null || v === null || v <= 0) continue
    const t = (Math.log10(v) - lo) / (hi - lo)
    scene.shapes.push({ kind: 'rect',
      x: xScale(x / xUnit) - xStep / 2, y: yScale(y / yUnit) - yStep / 2,
      w: xStep + 0.5, h: yStep + 0.5, fill: viridis(t) })
  }
  drawAxes(scene, box, xScale, yScale, { ...options, grid: false })
  // colorbar
  const bar: PanelBox = { x0: WIDTH - 86, y0: box.y0, x1: WIDTH - 62,
    y1: box.y1 }
  const steps = 64
  for (let i = 0; i < steps; i++) {
    const y0 = bar.y1 + (i / steps) * (bar.y0 - bar.y1)
    const y1 = bar.y1 + ((i + 1) / steps) * (bar.y0 - bar.y1)
    scene.shapes.push({ kind: 'rect', x: bar.x0, y: Math.min(y0, y1),
      w: bar.x1 - bar.x0, h: Math.abs(y1 - y0) + 0.5,
      fill: viridis(i / (steps - 1)) })
  }
  scene.shapes.push({ kind: 'line', stroke: '#202020', width: 1,
    pts: [[bar.x0, bar.y0], [bar.x0, bar.y1], [bar.x1, bar.y1],
          [bar.x1, bar.y0], [bar.x0, bar.y0]] })
  for (const t of niceTicks(lo, hi, 5)) {
    const y = bar.y1 + ((t - lo) / (hi - lo)) * (bar.y0 - bar.y1)
    scene.shapes.push({ kind: 'line', stroke: '#202020', width: 1,
      pts: [[bar.x1, y], [bar.x1 + 4, y]] })
    scene.shapes.push({ kind: 'text', x: bar.x1 + 7, y: y + 4,
      text: fmtTick(t, false), size: 10, color: '#202020',
      anchor: 'start' })
  }
  scene.shapes.push({ kind: 'text', x: (bar.x0 + bar.x1) / 2,
    y: bar.y0 - 8, text: options.colorLabel, size: 11, color: '#202020',
    anchor: 'middle' })
  return scene
}

// --- histogram pairs --------------------------------------------------------

export interface HistogramPanel {
  title: string
  k: number[]
  p: number[]
  poisson: number[]
}

export function renderHistogramPairs(panels: HistogramPanel[],
                                     yLabel: string): Scene {
  const scene = makeScene(WIDTH, HEIGHT)
  const columns = panels.length <= 2 ? panels.length : 2
  const rows = Math.ceil(panels.length / columns)
  const marginX = 70
  const marginTop = 34
  const marginBottom = 56
  const gap = 48
  const panelW = (WIDTH - 2 * marginX - (columns - 1) * gap) / columns
  const panelH = (HEIGHT - marginTop - marginBottom - (rows - 1) * gap)
    / rows
  const floor = 1e-10
  panels.forEach((panel, index) => {
    const cx = index % columns
    const cy = Math.floor(index / columns)
    const box: PanelBox = {
      x0: marginX + cx * (panelW + gap),
      y0: marginTop + cy * (panelH + gap),
      x1: marginX + cx * (panelW + gap) + panelW,
      y1: marginTop + cy * (panelH + gap) + panelH,
    }
    const kMax = Math.max(...panel.k)
    const xScale = linearScale([-0.5, kMax + 0.5], [box.x0, box.x1])
    const yScale = logScale([floor, 1], [box.y1, box.y0])
    drawAxes(scene, box, xScale, yScale, {
      xLabel: 'K', yLabel, title: panel.title, grid: false })
    const slot = (box.x1 - box.x0) / (kMax + 1)
    const barW = slot * 0.32
    panel.k.forEach((k, i) => {
      const center = xScale(k)
      const p = Math.max(panel.p[i], 0)
      const ref = Math.max(panel.poisson[i], 0)
      if (p > floor) {
        scene.shapes.push({ kind: 'rect', x: center - barW - 1,
          y: yScale(clampLog(p, [floor, 1])),
          w: barW, h: box.y1 - yScale(clampLog(p, [floor, 1])),
          fill: PALETTE[0] })
      }
      if (ref > floor) {
        const y = yScale(clampLog(ref, [floor, 1]))
        scene.shapes.push({ kind: 'rect', x: center + 1, y,
          w: barW, h: box.y1 - y, fill: '#c8c8c8' })
        scene.shapes.push({ kind: 'line', stroke: PALETTE[1], width: 1.6,
          pts: [[center + 1, y], [center + 1 + barW, y]] })
      }
    })
  })
  // shared legend under the panels
  const legendY = HEIGHT - 16
  scene.shapes.push({ kind: 'rect', x: marginX, y: legendY - 9, w: 14,
    h: 10, fill: PALETTE[0] })
  scene.shapes.push({ kind: 'text', x: marginX + 20, y: legendY,
    text: 'P(K)', size: 11, color: '#202020', anchor: 'start' })
  scene.shapes.push({ kind: 'rect', x: marginX + 80, y: legendY - 9,
    w: 14, h: 10, fill: '#c8c8c8' })
  scene.shapes.push({ kind: 'text', x: marginX + 100, y: legendY,
    text: 'POISSON REF', size: 11, color: '#202020', anchor: 'start' })
  return scene
}
