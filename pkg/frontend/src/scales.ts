/**
 * Axis scales, tick generation and the shared panel frame used by every
 * figure kind.
 */

import { textWidth } from './font.js'
import type { Scene } from './scene.js'

export interface Scale {
  (value: number): number
  domain: [number, number]
  range: [number, number]
  log: boolean
}

export function linearScale(domain: [number, number],
                            range: [number, number]): Scale {
  const [d0, d1] = domain
  const [r0, r1] = range
  const span = d1 - d0 || 1
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale
  fn.domain = domain
  fn.range = range
  fn.log = false
  return fn
}

export function logScale(domain: [number, number],
                         range: [number, number]): Scale {
  const d0 = Math.log10(domain[0])
  const d1 = Math.log10(domain[1])
  const [r0, r1] = range
  const span = d1 - d0 || 1
  const fn = ((v: number) =>
    r0 + ((Math.log10(v) - d0) / span) * (r1 - r0)) as Scale
  fn.domain = domain
  fn.range = range
  fn.log = true
  return fn
}

export function niceTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo || 1
  const rawStep = span / count
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)))
  let step = mag
  for (const m of [1, 2, 5, 10]) {
    if (rawStep <= m * mag) { step = m * mag; break }
  }
  const first = Math.ceil(lo / step) * step
  const ticks = []
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v)
  }
  return ticks
}

export function decadeTicks(lo: number, hi: number): number[] {
  const ticks = []
  for (let e = Math.ceil(Math.log10(lo) - 1e-9);
       e <= Math.floor(Math.log10(hi) + 1e-9); e++) {
    ticks.push(Math.pow(10, e))
  }
  return ticks
}

export function fmtTick(value: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(value))
    if (e >= -2 && e <= 2) {
      return String(Math.pow(10, e))
    }
    return `1E${e}`
  }
  if (value === 0) return '0'
  const abs = Math.abs(value)
  if (abs >= 1e4 || abs < 1e-3) {
    return value.toExponential(0).replace('e', 'E').replace('E+', 'E')
  }
  return String(Math.round(value * 1000) / 1000)
}

export interface PanelBox {
  x0: number
  y0: number
  x1: number
  y1: number
}

const AXIS_COLOR = '#202020'
const GRID_COLOR = '#d8d8d8'
const TICK_SIZE = 11

export interface AxisOptions {
  xLabel: string
  yLabel: string
  title?: string
  grid?: boolean
}

/** Frame, ticks, grid and labels for one panel. */
export function drawAxes(scene: Scene, box: PanelBox, xScale: Scale,
                         yScale: Scale, options: AxisOptions): void {
  const xTicks = xScale.log ? decadeTicks(...xScale.domain)
    : niceTicks(...xScale.domain)
  const yTicks = yScale.log ? decadeTicks(...yScale.domain)
    : niceTicks(...yScale.domain)
  if (options.grid !== false) {
    for (const t of xTicks) {
      scene.shapes.push({ kind: 'line', stroke: GRID_COLOR, width: 1,
        pts: [[xScale(t), box.y0], [xScale(t), box.y1]] })
    }
    for (const t of yTicks) {
      scene.shapes.push({ kind: 'line', stroke: GRID_COLOR, width: 1,
        pts: [[box.x0, yScale(t)], [box.x1, yScale(t)]] })
    }
  }
  scene.shapes.push({ kind: 'line', stroke: AXIS_COLOR, width: 1.5,
    pts: [[box.x0, box.y0], [box.x0, box.y1], [box.x1, box.y1],
          [box.x1, box.y0], [box.x0, box.y0]] })
  for (const t of xTicks) {
    scene.shapes.push({ kind: 'line', stroke: AXIS_COLOR, width: 1.5,
      pts: [[xScale(t), box.y1], [xScale(t), box.y1 - 5]] })
    scene.shapes.push({ kind: 'text', x: xScale(t), y: box.y1 + 16,
      text: fmtTick(t, xScale.log), size: TICK_SIZE, color: AXIS_COLOR,
      anchor: 'middle' })
  }
  for (const t of yTicks) {
    scene.shapes.push({ kind: 'line', stroke: AXIS_COLOR, width: 1.5,
      pts: [[box.x0, yScale(t)], [box.x0 + 5, yScale(t)]] })
    scene.shapes.push({ kind: 'text', x: box.x0 - 6, y: yScale(t) + 4,
      text: fmtTick(t, yScale.log), size: TICK_SIZE, color: AXIS_COLOR,
      anchor: 'end' })
  }
  scene.shapes.push({ kind: 'text', x: (box.x0 + box.x1) / 2,
    y: box.y1 + 34, text: options.xLabel, size: 12, color: AXIS_COLOR,
    anchor: 'middle' })
  scene.shapes.push({ kind: 'text', x: box.x0 - 52,
    y: (box.y0 + box.y1) / 2, text: options.yLabel, size: 12,
    color: AXIS_COLOR, anchor: 'middle', vertical: true })
  if (options.title) {
    scene.shapes.push({ kind: 'text', x: (box.x0 + box.x1) / 2,
      y: box.y0 - 8, text: options.title, size: 13, color: AXIS_COLOR,
      anchor: 'middle' })
  }
}

export interface LegendEntry {
  label: string
  color: string
  dash?: number[]
  marker?: boolean
}

export function drawLegend(scene: Scene, box: PanelBox,
                           entries: LegendEntry[]): void {
  const size = 11
  const widest = Math.max(...entries.map((e) => textWidth(e.label, size)))
  const x1 = box.x1 - 8
  const x0 = x1 - widest - 34
  let y = box.y0 + 10
  scene.shapes.push({ kind: 'rect', x: x0 - 4, y: y - 8,
    w: x1 - x0 + 8, h: entries.length * 16 + 6, fill: '#ffffff' })
  for (const entry of entries) {
    scene.shapes.push({ kind: 'line', stroke: entry.color, width: 2,
      dash: entry.dash, pts: [[x0, y], [x0 + 24, y]] })
    if (entry.marker) {
      scene.shapes.push({ kind: 'circle', cx: x0 + 12, cy: y, r: 3.2,
        stroke: entry.color, width: 1.4 })
    }
    scene.shapes.push({ kind: 'text', x: x0 + 30, y: y + 4,
      text: entry.label, size, color: AXIS_COLOR, anchor: 'start' })
    y += 16
  }
}

/** Clamp a log-scale value into the plotted domain. */
export function clampLog(value: number, domain: [number, number]): number {
  return Math.min(Math.max(value, domain[0]), domain[1])
}
