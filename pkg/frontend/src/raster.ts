/**
 * Scene rasterizer: RGBA pixel buffer with line/rect/circle/stroke-text
 * drawing, encoded through the PNG writer.  Geometry matches the SVG
 * backend; text uses the embedded stroke font.
 */

import { GLYPH_ADVANCE, GLYPH_EM, glyphStrokes, textWidth } from './font.js'
import { encodePng } from './png.js'
import type { Circle, Line, Rect, Scene, Text } from './scene.js'

function parseColor(hex: string): [number, number, number, number] {
  const h = hex.replace('#', '')
  const full = h.length === 3 ? h.split('').map((c) => c + c).join('') : h
  const v = parseInt(full, 16)
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff, 255]
}

class Raster {
  readonly data: Uint8Array

  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 4)
  }

  set(x: number, y: number, rgba: [number, number, number, number]): void {
    const xi = Math.round(x)
    const yi = Math.round(y)
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return
    this.data.set(rgba, (yi * this.width + xi) * 4)
  }

  disc(x: number, y: number, r: number,
       rgba: [number, number, number, number]): void {
    if (r <= 0.6) {
      this.set(x, y, rgba)
      return
    }
    const r2 = r * r
    for (let dy = -Math.ceil(r); dy <= Math.ceil(r); dy++) {
      for (let dx = -Math.ceil(r); dx <= Math.ceil(r); dx++) {
        if (dx * dx + dy * dy <= r2) this.set(x + dx, y + dy, rgba)
      }
    }
  }

  fillRect(x: number, y: number, w: number, h: number,
           rgba: [number, number, number, number]): void {
    const x0 = Math.max(0, Math.round(x))
    const y0 = Math.max(0, Math.round(y))
    const x1 = Math.min(this.width, Math.round(x + w))
    const y1 = Math.min(this.height, Math.round(y + h))
    for (let yy = y0; yy < y1; yy++) {
      for (let xx = x0; xx < x1; xx++) {
        this.data.set(rgba, (yy * this.width + xx) * 4)
      }
    }
  }

  segment(x0: number, y0: number, x1: number, y1: number, width: number,
          rgba: [number, number, number, number]): void {
    const steps = Math.max(1, Math.ceil(Math.hypot(x1 - x0, y1 - y0) * 2))
    const r = width / 2
    for (let i = 0; i <= steps; i++) {
      const t = i / steps
      this.disc(x0 + t * (x1 - x0), y0 + t * (y1 - y0), r, rgba)
    }
  }
}

function* dashSegments(pts: Array<[number, number]>, dash: number[]):
    Generator<[number, number, number, number]> {
  // walk the polyline emitting on-dash pieces
  let patternIndex = 0
  let remaining = dash[0]
  let penDown = true
  for (let i = 1; i < pts.length; i++) {
    let [x0, y0] = pts[i - 1]
    const [x1, y1] = pts[i]
    let segLength = Math.hypot(x1 - x0, y1 - y0)
    while (segLength > 1e-9) {
      const take = Math.min(segLength, remaining)
      const t = take / segLength
      const xm = x0 + t * (x1 - x0)
      const ym = y0 + t * (y1 - y0)
      if (penDown) yield [x0, y0, xm, ym]
      x0 = xm
      y0 = ym
      segLength -= take
      remaining -= take
      if (remaining <= 1e-9) {
        patternIndex = (patternIndex + 1) % dash.length
        remaining = dash[patternIndex]
        penDown = !penDown
      }
    }
  }
}

function drawLine(raster: Raster, shape: Line): void {
  const rgba = parseColor(shape.stroke)
  if (shape.dash && shape.dash.length >= 2) {
    for (const [x0, y0, x1, y1] of dashSegments(shape.pts, shape.dash)) {
      raster.segment(x0, y0, x1, y1, shape.width, rgba)
    }
    return
  }
  for (let i = 1; i < shape.pts.length; i++) {
    raster.segment(shape.pts[i - 1][0], shape.pts[i - 1][1],
                   shape.pts[i][0], shape.pts[i][1], shape.width, rgba)
  }
}

function drawCircle(raster: Raster, shape: Circle): void {
  if (shape.fill) {
    raster.disc(shape.cx, shape.cy, shape.r, parseColor(shape.fill))
  }
  const rgba = parseColor(shape.stroke)
  const steps = Math.max(12, Math.ceil(2 * Math.PI * shape.r))
  for (let i = 0; i < steps; i++) {
    const a0 = (2 * Math.PI * i) / steps
    const a1 = (2 * Math.PI * (i + 1)) / steps
    raster.segment(shape.cx + shape.r * Math.cos(a0),
                   shape.cy + shape.r * Math.sin(a0),
                   shape.cx + shape.r * Math.cos(a1),
                   shape.cy + shape.r * Math.sin(a1), shape.width, rgba)
  }
}

function drawText(raster: Raster, shape: Text): void {
  const rgba = parseColor(shape.color)
  const scale = shape.size / GLYPH_EM
  const width = textWidth(shape.text, shape.size)
  let dx = 0
  if (shape.anchor === 'middle') dx = -width / 2
  if (shape.anchor === 'end') dx = -width
  const strokeWidth = Math.max(1, shape.size / 10)
  for (let i = 0; i < shape.text.length; i++) {
    const origin = dx + i * GLYPH_ADVANCE * scale
    for (const stroke of glyphStrokes(shape.text[i])) {
      for (let j = 1; j < stroke.length; j++) {
        // glyph grid is y-up; vertical text rotates 90deg CCW
        const gx0 = origin + stroke[j - 1][0] * scale
        const gy0 = stroke[j - 1][1] * scale
        const gx1 = origin + stroke[j][0] * scale
        const gy1 = stroke[j][1] * scale
        if (shape.vertical) {
          raster.segment(shape.x + gy0, shape.y - gx0,
                         shape.x + gy1, shape.y - gx1, strokeWidth, rgba)
        } else {
          raster.segment(shape.x + gx0, shape.y - gy0,
                         shape.x + gx1, shape.y - gy1, strokeWidth, rgba)
        }
      }
    }
  }
}

export function renderPng(scene: Scene): Buffer {
  const raster = new Raster(scene.width, scene.height)
  raster.fillRect(0, 0, scene.width, scene.height,
                  parseColor(scene.background))
  for (const shape of scene.shapes) {
    switch (shape.kind) {
      case 'rect':
        raster.fillRect(shape.x, shape.y, shape.w, shape.h,
                        parseColor(shape.fill))
        break
      case 'line':
        drawLine(raster, shape)
        break
      case 'circle':
        drawCircle(raster, shape)
        break
      case 'text':
        drawText(raster, shape as Text)
        break
    }
  }
  return encodePng(scene.width, scene.height, raster.data, scene.metadata)
}
