#!/usr/bin/env node
/**
 * Figure renderer CLI.
 *
 *   spinkerr-render render --recipe PATH [--out DIR]
 *   spinkerr-render render --all --data DIR [--out DIR]
 *   spinkerr-render render --figure NAME --data DIR [--out DIR]
 *
 * Reads only the simulator's exported figure-data files; writes one PNG
 * and one SVG per figure, each stamped with the sha256 of its input so
 * images are traceable to exact sweep outputs.  Exit codes: 0 ok,
 * 2 usage, 1 data/render failure (no file is written on failure).
 */

import { existsSync, mkdirSync } from 'fs'
import { pathToFileURL } from 'url'

import { FIGURE_NAMES, recipeFor, recipeFromFile, render } from './recipes.js'
import { SchemaError } from './schema.js'

interface Args {
  command?: string
  recipe?: string
  figure?: string
  data?: string
  out: string
  all: boolean
}

function parseArgs(argv: string[]): Args {
  const args: Args = { out: '.', all: false }
  const positional: string[] = []
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]
    const next = () => {
      i += 1
      if (i >= argv.length) throw new UsageError(`${arg} needs a value`)
      return argv[i]
    }
    if (arg === '--recipe') args.recipe = next()
    else if (arg === '--figure') args.figure = next()
    else if (arg === '--data') args.data = next()
    else if (arg === '--out') args.out = next()
    else if (arg === '--all') args.all = true
    else if (arg === '--help' || arg === '-h') throw new HelpRequest()
    else if (arg.startsWith('-')) throw new UsageError(`unknown flag ${arg}`)
    else positional.push(arg)
  }
  if (positional.length !== 1 || positional[0] !== 'render') {
    throw new UsageError("expected the 'render' command")
  }
  args.command = positional[0]
  return args
}

class UsageError extends Error {}
class HelpRequest extends Error {}

const USAGE = `usage:
  spinkerr-render render --recipe PATH [--out DIR]
  spinkerr-render render --all --data DIR [--out DIR]
  spinkerr-render render --figure NAME --data DIR [--out DIR]

figures: ${FIGURE_NAMES.join(', ')}`

export function main(argv: string[]): number {
  let args: Args
  try {
    args = parseArgs(argv)
  } catch (err) {
    if (err instanceof HelpRequest) {
      console.log(USAGE)
      return 0
    }
    console.error(`usage: ${(err as Error).message}`)
    console.error(USAGE)
    return 2
  }
  const selectors = [args.recipe, args.figure, args.all ? 'all' : undefined]
    .filter((v) => v !== undefined).length
  if (selectors !== 1) {
    console.error('usage: pass exactly one of --recipe, --figure, --all')
    return 2
  }
  if ((args.all || args.figure) && !args.data) {
    console.error('usage: --all/--figure need --data DIR')
    return 2
  }
  try {
    mkdirSync(args.out, { recursive: true })
    const recipes = args.recipe
      ? [recipeFromFile(args.recipe)]
      : (args.all ? FIGURE_NAMES : [args.figure!])
          .map((name) => recipeFor(name, args.data!))
    for (const recipe of recipes) {
      if (!existsSync(recipe.input)) {
        throw new SchemaError(`input not found: ${recipe.input}`)
      }
      const out = render(recipe, args.out)
      console.log(`${out.png} ${out.svg} sha256=${out.checksum}`)
    }
    return 0
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`data: ${err.message}`)
    } else {
      console.error(`render: ${(err as Error).message}`)
    }
    return 1
  }
}

if (process.argv[1]
    && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)))
}
