// Pure HTML builders: a collapsible source-like tree plus a naive visual
// rendering of the snapshot. Every rendered element carries its preorder
// node id so gestures map 1:1 onto server node ids.

import type { NodeJson, PredictionJson, TreeJson } from './types.js'

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
}

export function renderTreeView(tree: TreeJson, highlight: number | null): string {
  const parts: string[] = []
  const walk = (node: NodeJson, id: { value: number }, depth: number): void => {
    const myId = id.value
    id.value += 1
    const attrs = Object.entries(node.attrs ?? {})
      .map(([k, v]) => ` ${esc(k)}="${esc(v)}"`).join('')
    const classes = ['tree-node']
    if (myId === highlight) classes.push('highlight')
    const text = node.text ? ` <span class="tree-text">${esc(node.text)}</span>` : ''
    parts.push(
      `<div class="${classes.join(' ')}" data-node-id="${myId}" ` +
      `style="margin-left:${depth * 14}px">&lt;${esc(node.tag)}${attrs}&gt;${text}</div>`)
    for (const child of node.children ?? []) walk(child, id, depth + 1)
  }
  walk(tree.root, { value: 0 }, 0)
  return parts.join('\n')
}

export function renderVisualView(tree: TreeJson, highlight: number | null): string {
  const counter = { value: 0 }
  const render = (node: NodeJson): string => {
    const id = counter.value
    counter.value += 1
    const classes = ['vis-node', `vis-${node.tag}`]
    if (node.attrs?.class) classes.push(`site-${node.attrs.class}`)
    if (id === highlight) classes.push('highlight')
    const text = node.text ? esc(node.text) : ''
    const inner = (node.children ?? []).map(render).join('')
    if (node.tag === 'input') {
      return `<span class="${classes.join(' ')}" data-node-id="${id}">` +
        `[${text || '   '}]</span>`
    }
    return `<span class="${classes.join(' ')}" data-node-id="${id}">${text}${inner}</span>`
  }
  return render(tree.root)
}

export function renderPredictions(predictions: PredictionJson[], focused: number): string {
  if (!predictions.length) return '<em>no predictions yet</em>'
  return predictions.map((prediction, index) => {
    const action = prediction.action
    const args = [action.selector, action.value_path, action.text]
      .filter(Boolean).map((a) => esc(String(a))).join(', ')
    const marker = index === focused ? 'focused' : ''
    return `<div class="prediction ${marker}" data-prediction-id="${prediction.id}">` +
      `${index === focused ? '&#9654; ' : ''}${esc(action.kind)}(${args})</div>`
  }).join('\n')
}

export function renderDataPanel(cells: { path: string; label: string }[]): string {
  if (!cells.length) return '<em>no input data</em>'
  return cells.map((cell) =>
    `<div class="data-cell" draggable="true" data-value-path="${esc(cell.path)}">` +
    `${esc(cell.label)} <code>${esc(cell.path)}</code></div>`).join('\n')
}
