/**
 * Minimal retained scene: figures are built once as shape lists and then
 * rendered by the SVG writer and the PNG rasterizer, so both outputs come
 * from identical geometry.  Coordinates are pixels, y down.
 */

export interface Rect {
  kind: 'rect'
  x: number; y: number; w: number; h: number
  fill: string
}

export interface Line {
  kind: 'line'
  pts: Array<[number, number]>
  stroke: string
  width: number
  dash?: number[]
}

export interface Circle {
  kind: 'circle'
  cx: number; cy: number; r: number
  stroke: string
  width: number
  fill?: string
}

export interface Text {
  kind: 'text'
  x: number; y: number
  text: string
  size: number
  color: string
  anchor: 'start' | 'middle' | 'end'
  /** rotate 90 degrees counter-clockwise around (x, y) */
  vertical?: boolean
}

export type Shape = Rect | Line | Circle | Text

export interface Scene {
  width: number
  height: number
  background: string
  shapes: Shape[]
  /** key/value metadata stamped into both output formats */
  metadata: Record<string, string>
}

export function makeScene(width: number, height: number): Scene {
  return { width, height, background: '#ffffff', shapes: [], metadata: {} }
}
