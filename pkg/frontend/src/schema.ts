/**
 * Readers for the simulator's exported data files.
 *
 * Two schemas exist: `sweep-v1` (one row per parameter point, per-mode
 * observables plus closed-form columns) and `hist-v1` (one row per
 * photon-number bin). Both arrive as CSV (header row, no quoting, no
 * commas inside cells) or JSON (`{"schema": ..., "rows": [...]}`).
 * Undefined observables are empty CSV cells / JSON nulls.
 */

import { readFileSync } from 'fs'

export const SWEEP_COLUMNS = [
  'delta0', 'omega', 'J', 'xi', 'chi', 'params_key',
  'n_cw', 's_cw', 'g2_cw', 'g3_cw', 'regime_cw',
  'n_ccw', 's_ccw', 'g2_ccw', 'g3_ccw', 'regime_ccw',
  'g2_analytic_cw', 'g3_analytic_cw', 'g2_analytic_ccw', 'g3_analytic_ccw',
  'flags',
] as const

export const HIST_COLUMNS = [
  'delta0', 'omega', 'J', 'xi', 'chi', 'params_key',
  'mode', 'k', 'p', 'poisson',
] as const

const STRING_COLUMNS = new Set(['params_key', 'regime_cw', 'regime_ccw',
  'flags', 'mode'])

export type Cell = number | string | null
export type Row = Record<string, Cell>

export interface Dataset {
  schema: 'sweep-v1' | 'hist-v1'
  rows: Row[]
  /** raw bytes of the input file, for checksum stamping */
  bytes: Buffer
}

export class SchemaError extends Error {}

function columnDiff(found: string[], expected: readonly string[]): string {
  const have = new Set(found)
  const want = new Set(expected)
  const missing = expected.filter((c) => !have.has(c))
  const extra = found.filter((c) => !want.has(c))
  const parts = []
  if (missing.length) parts.push(`missing: ${missing.join(', ')}`)
  if (extra.length) parts.push(`unexpected: ${extra.join(', ')}`)
  return parts.join('; ')
}

function schemaFor(columns: string[]): Dataset['schema'] {
  const sweepDiff = columnDiff(columns, SWEEP_COLUMNS)
  if (!sweepDiff) return 'sweep-v1'
  const histDiff = columnDiff(columns, HIST_COLUMNS)
  if (!histDiff) return 'hist-v1'
  throw new SchemaError(
    `columns match neither schema (sweep-v1 diff: ${sweepDiff})` +
    ` (hist-v1 diff: ${histDiff})`)
}

function parseCell(column: string, cell: string): Cell {
  if (STRING_COLUMNS.has(column)) return cell
  if (cell === '') return null
  const value = Number(cell)
  if (Number.isNaN(value)) {
    throw new SchemaError(`non-numeric value ${JSON.stringify(cell)} in ` +
      `column ${column}`)
  }
  return value
}

function parseCsv(text: string, bytes: Buffer): Dataset {
  const lines = text.trim().split('\n')
  if (lines.length === 0 || lines[0].trim() === '') {
    throw new SchemaError('empty input file')
  }
  const header = lines[0].split(',')
  const schema = schemaFor(header)
  const rows: Row[] = []
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(',')
    if (cells.length !== header.length) {
      throw new SchemaError(
        `row ${i} has ${cells.length} cells, expected ${header.length}`)
    }
    const row: Row = {}
    header.forEach((column, j) => { row[column] = parseCell(column, cells[j]) })
    rows.push(row)
  }
  if (rows.length === 0) throw new SchemaError('no data rows')
  return { schema, rows, bytes }
}

function parseJson(text: string, bytes: Buffer): Dataset {
  let doc: unknown
  try {
    doc = JSON.parse(text)
  } catch (err) {
    throw new SchemaError(`invalid JSON: ${(err as Error).message}`)
  }
  const obj = doc as { schema?: string; rows?: Row[] }
  if (obj.schema !== 'sweep-v1' && obj.schema !== 'hist-v1') {
    throw new SchemaError(`unknown schema ${JSON.stringify(obj.schema)}`)
  }
  if (!Array.isArray(obj.rows) || obj.rows.length === 0) {
    throw new SchemaError('no data rows')
  }
  const expected = obj.schema === 'sweep-v1' ? SWEEP_COLUMNS : HIST_COLUMNS
  const diff = columnDiff(Object.keys(obj.rows[0]), expected)
  if (diff) throw new SchemaError(`row columns do not match (${diff})`)
  return { schema: obj.schema, rows: obj.rows, bytes }
}

export function loadDataset(path: string): Dataset {
  let bytes: Buffer
  try {
    bytes = readFileSync(path)
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`)
  }
  const text = bytes.toString('utf8')
  if (text.trimStart().startsWith('{')) return parseJson(text, bytes)
  return parseCsv(text, bytes)
}

export function expectSchema(data: Dataset, schema: Dataset['schema']): void {
  if (data.schema !== schema) {
    throw new SchemaError(`expected ${schema} input, got ${data.schema}`)
  }
}

/** Numeric cell or null; throws if the column holds strings. */
export function num(row: Row, column: string): number | null {
  const v = row[column]
  if (v === null || typeof v === 'number') return v
  throw new SchemaError(`column ${column} is not numeric`)
}

/** Distinct values of a numeric column, ascending. */
export function levels(rows: Row[], column: string): number[] {
  const seen = new Set<number>()
  for (const row of rows) {
    const v = num(row, column)
    if (v !== null) seen.add(v)
  }
  return [...seen].sort((a, b) => a - b)
}
