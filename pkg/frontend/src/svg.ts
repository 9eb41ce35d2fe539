/**
 * Scene-to-SVG writer.  Text uses a generic monospace family (the PNG
 * backend embeds its own stroke font); metadata is carried in a
 * <metadata> block as key: value lines.
 */

import type { Scene, Shape } from './scene.js'

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
}

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value)
    : String(Math.round(value * 100) / 100)
}

function shapeSvg(shape: Shape): string {
  switch (shape.kind) {
    case 'rect':
      return `<rect x="${fmt(shape.x)}" y="${fmt(shape.y)}" ` +
        `width="${fmt(shape.w)}" height="${fmt(shape.h)}" ` +
        `fill="${shape.fill}"/>`
    case 'line': {
      const pts = shape.pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ')
      const dash = shape.dash ? ` stroke-dasharray="${shape.dash.join(' ')}"`
        : ''
      return `<polyline points="${pts}" fill="none" ` +
        `stroke="${shape.stroke}" stroke-width="${fmt(shape.width)}"` +
        `${dash} stroke-linejoin="round" stroke-linecap="round"/>`
    }
    case 'circle': {
      const fill = shape.fill ?? 'none'
      return `<circle cx="${fmt(shape.cx)}" cy="${fmt(shape.cy)}" ` +
        `r="${fmt(shape.r)}" fill="${fill}" stroke="${shape.stroke}" ` +
        `stroke-width="${fmt(shape.width)}"/>`
    }
    case 'text': {
      const anchor = shape.anchor === 'start' ? 'start'
        : shape.anchor === 'end' ? 'end' : 'middle'
      const transform = shape.vertical
        ? ` transform="rotate(-90 ${fmt(shape.x)} ${fmt(shape.y)})"` : ''
      return `<text x="${fmt(shape.x)}" y="${fmt(shape.y)}" ` +
        `font-family="monospace" font-size="${fmt(shape.size)}" ` +
        `fill="${shape.color}" text-anchor="${anchor}"${transform}>` +
        `${esc(shape.text)}</text>`
    }
  }
}

export function renderSvg(scene: Scene): string {
  const lines = [
    '<?xml version="1.0" encoding="UTF-8"?>',
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" ` +
      `height="${scene.height}" viewBox="0 0 ${scene.width} ` +
      `${scene.height}">`,
  ]
  const meta = Object.keys(scene.metadata).sort()
    .map((k) => `${k}: ${esc(scene.metadata[k])}`)
  if (meta.length) {
    lines.push(`<metadata>${meta.join('\n')}</metadata>`)
  }
  lines.push(`<rect width="100%" height="100%" ` +
    `fill="${scene.background}"/>`)
  for (const shape of scene.shapes) lines.push(shapeSvg(shape))
  lines.push('</svg>')
  return lines.join('\n') + '\n'
}
