// Client-side view of server snapshots. Node ids are preorder indices and
// absolute paths use child steps with per-tag sibling ranks -- the same
// conventions the server uses, so ids and paths agree on both ends.

import type { NodeJson, TreeJson } from './types.js'

export interface NumberedNode {
  id: number
  node: NodeJson
  parent: number | null
}

export function numberNodes(tree: TreeJson): NumberedNode[] {
  const out: NumberedNode[] = []
  const walk = (node: NodeJson, parent: number | null): void => {
    const id = out.length
    out.push({ id, node, parent })
    for (const child of node.children ?? []) walk(child, id)
  }
  walk(tree.root, null)
  return out
}

export function nodeById(tree: TreeJson, id: number): NodeJson | null {
  const numbered = numberNodes(tree)
  return id >= 0 && id < numbered.length ? numbered[id].node : null
}

/** Absolute selector of a node: child steps with per-tag sibling indices. */
export function absolutePath(tree: TreeJson, id: number): string | null {
  const numbered = numberNodes(tree)
  if (id < 0 || id >= numbered.length) return null
  const steps: string[] = []
  let current = numbered[id]
  while (current.parent !== null) {
    const parent = numbered[current.parent]
    let rank = 0
    for (const sibling of parent.node.children) {
      if (sibling.tag === current.node.tag) {
        rank += 1
        if (sibling === current.node) break
      }
    }
    steps.unshift(`/${current.node.tag}[${rank}]`)
    current = parent
  }
  return steps.join('')
}

/** Concatenated own and descendant text in document order. */
export function fullText(node: NodeJson): string {
  let out = node.text ?? ''
  for (const child of node.children ?? []) out += fullText(child)
  return out
}

/** Rows of the input-data panel: one draggable value path per leaf value. */
export interface DataCell {
  path: string
  label: string
}

export function dataCells(data: unknown, prefix = 'x'): DataCell[] {
  const cells: DataCell[] = []
  const walk = (value: unknown, path: string): void => {
    if (Array.isArray(value)) {
      value.forEach((item, index) => walk(item, `${path}[${index + 1}]`))
    } else if (value !== null && typeof value === 'object') {
      for (const [key, item] of Object.entries(value as Record<string, unknown>)) {
        const quoted = key.replace(/\\/g, '\\\\').replace(/'/g, "\\'")
        walk(item, `${path}['${quoted}']`)
      }
    } else {
      cells.push({ path, label: String(value) })
    }
  }
  walk(data, prefix)
  return cells
}
