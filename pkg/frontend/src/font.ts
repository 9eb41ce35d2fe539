/**
 * Compact stroke font for the rasterizer (the SVG writer uses native
 * text).  Glyphs are polylines on a 5x8 grid, y up, baseline at 0, cap
 * height 7.  Lowercase falls back to uppercase; unknown glyphs draw a
 * box.  Plotter-style but fully deterministic and dependency-free.
 */

export type Stroke = Array<[number, number]>

const G: Record<string, Stroke[]> = {
  '0': [[[0, 0], [4, 0], [4, 7], [0, 7], [0, 0]], [[0, 1], [4, 6]]],
  '1': [[[1, 5], [2, 7], [2, 0]], [[1, 0], [3, 0]]],
  '2': [[[0, 6], [1, 7], [3, 7], [4, 6], [4, 4], [0, 0], [4, 0]]],
  '3': [[[0, 7], [4, 7], [4, 0], [0, 0]], [[1, 4], [4, 4]]],
  '4': [[[4, 3], [0, 3], [3, 7], [3, 0]]],
  '5': [[[4, 7], [0, 7], [0, 4], [3, 4], [4, 3], [4, 1], [3, 0], [0, 0]]],
  '6': [[[4, 7], [1, 7], [0, 6], [0, 1], [1, 0], [3, 0], [4, 1], [4, 3],
         [3, 4], [0, 4]]],
  '7': [[[0, 7], [4, 7], [1, 0]]],
  '8': [[[0, 0], [4, 0], [4, 7], [0, 7], [0, 0]], [[0, 4], [4, 4]]],
  '9': [[[0, 0], [3, 0], [4, 1], [4, 6], [3, 7], [1, 7], [0, 6], [0, 4],
         [1, 3], [4, 3]]],
  A: [[[0, 0], [0, 5], [2, 7], [4, 5], [4, 0]], [[0, 3], [4, 3]]],
  B: [[[0, 0], [0, 7], [3, 7], [4, 6], [4, 5], [3, 4], [0, 4]],
      [[3, 4], [4, 3], [4, 1], [3, 0], [0, 0]]],
  C: [[[4, 1], [3, 0], [1, 0], [0, 1], [0, 6], [1, 7], [3, 7], [4, 6]]],
  D: [[[0, 0], [0, 7], [2, 7], [4, 5], [4, 2], [2, 0], [0, 0]]],
  E: [[[4, 0], [0, 0], [0, 7], [4, 7]], [[0, 4], [3, 4]]],
  F: [[[0, 0], [0, 7], [4, 7]], [[0, 4], [3, 4]]],
  G: [[[4, 6], [3, 7], [1, 7], [0, 6], [0, 1], [1, 0], [3, 0], [4, 1],
       [4, 3], [2, 3]]],
  H: [[[0, 0], [0, 7]], [[4, 0], [4, 7]], [[0, 4], [4, 4]]],
  I: [[[1, 0], [3, 0]], [[2, 0], [2, 7]], [[1, 7], [3, 7]]],
  J: [[[0, 1], [1, 0], [3, 0], [4, 1], [4, 7]]],
  K: [[[0, 0], [0, 7]], [[4, 7], [0, 3]], [[1, 4], [4, 0]]],
  L: [[[0, 7], [0, 0], [4, 0]]],
  M: [[[0, 0], [0, 7], [2, 4], [4, 7], [4, 0]]],
  N: [[[0, 0], [0, 7], [4, 0], [4, 7]]],
  O: [[[0, 1], [0, 6], [1, 7], [3, 7], [4, 6], [4, 1], [3, 0], [1, 0],
       [0, 1]]],
  P: [[[0, 0], [0, 7], [3, 7], [4, 6], [4, 4], [3, 3], [0, 3]]],
  Q: [[[0, 1], [0, 6], [1, 7], [3, 7], [4, 6], [4, 1], [3, 0], [1, 0],
       [0, 1]], [[2, 2], [4, 0]]],
  R: [[[0, 0], [0, 7], [3, 7], [4, 6], [4, 4], [3, 3], [0, 3]],
      [[2, 3], [4, 0]]],
  S: [[[4, 6], [3, 7], [1, 7], [0, 6], [0, 5], [1, 4], [3, 4], [4, 3],
       [4, 1], [3, 0], [0, 0], [0, 1]]],
  T: [[[0, 7], [4, 7]], [[2, 7], [2, 0]]],
  U: [[[0, 7], [0, 1], [1, 0], [3, 0], [4, 1], [4, 7]]],
  V: [[[0, 7], [2, 0], [4, 7]]],
  W: [[[0, 7], [1, 0], [2, 4], [3, 0], [4, 7]]],
  X: [[[0, 0], [4, 7]], [[0, 7], [4, 0]]],
  Y: [[[0, 7], [2, 4], [4, 7]], [[2, 4], [2, 0]]],
  Z: [[[0, 7], [4, 7], [0, 0], [4, 0]]],
  '-': [[[0.5, 3.5], [3.5, 3.5]]],
  '+': [[[2, 1.5], [2, 5.5]], [[0, 3.5], [4, 3.5]]],
  '.': [[[1.8, 0], [2.2, 0]], [[2, 0], [2, 0.7]]],
  ',': [[[2.2, 0.7], [1.6, -1]]],
  ':': [[[2, 1], [2, 1.8]], [[2, 4.2], [2, 5]]],
  '/': [[[0, 0], [4, 7]]],
  '(': [[[3, 7.5], [2, 5.5], [2, 1.5], [3, -0.5]]],
  ')': [[[1, 7.5], [2, 5.5], [2, 1.5], [1, -0.5]]],
  '[': [[[3, 7.5], [1.5, 7.5], [1.5, -0.5], [3, -0.5]]],
  ']': [[[1, 7.5], [2.5, 7.5], [2.5, -0.5], [1, -0.5]]],
  '=': [[[0.5, 2.5], [3.5, 2.5]], [[0.5, 4.5], [3.5, 4.5]]],
  '_': [[[0, -1], [4, -1]]],
  '*': [[[2, 2], [2, 6]], [[0.5, 3], [3.5, 5]], [[0.5, 5], [3.5, 3]]],
  '%': [[[0, 0], [4, 7]],
        [[0, 5.5], [1, 5.5], [1, 6.5], [0, 6.5], [0, 5.5]],
        [[3, 0.5], [4, 0.5], [4, 1.5], [3, 1.5], [3, 0.5]]],
  '^': [[[1, 5.5], [2, 7], [3, 5.5]]],
  "'": [[[2, 7], [2, 5.5]]],
  '<': [[[3.5, 6], [0.5, 3.5], [3.5, 1]]],
  '>': [[[0.5, 6], [3.5, 3.5], [0.5, 1]]],
  ' ': [],
}

const FALLBACK: Stroke[] = [[[0, 0], [4, 0], [4, 7], [0, 7], [0, 0]]]

export const GLYPH_ADVANCE = 6   // grid units, including spacing
export const GLYPH_EM = 8        // grid units per font size

export function glyphStrokes(ch: string): Stroke[] {
  const up = ch.toUpperCase()
  return G[ch] ?? G[up] ?? FALLBACK
}

export function textWidth(text: string, size: number): number {
  return (text.length * GLYPH_ADVANCE - 1) * (size / GLYPH_EM)
}
