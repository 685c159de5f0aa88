// Browser wiring: every gesture becomes a server event; the view re-renders
// only from server-confirmed state. At most one request is in flight.

import { Client, ApiError } from './api.js'
import { dataCells } from './dom.js'
import { renderDataPanel, renderPredictions, renderTreeView, renderVisualView } from './render.js'
import { focusedPrediction, highlightedNodeId, initialModel, reduce } from './state.js'
import type { UiEvent } from './state.js'
import { ACTION_KIND_BY_MODE } from './types.js'
import type { ActionMode, SessionStateJson } from './types.js'

const client = new Client('')
let model = initialModel()

function dispatch(event: UiEvent): void {
  model = reduce(model, event)
  render()
}

async function serverStep(step: () => Promise<SessionStateJson>): Promise<void> {
  if (model.busy || !model.sessionId) return
  dispatch({ type: 'busy', busy: true })
  try {
    const state = await step()
    const page = await client.page(model.sessionId)
    dispatch({ type: 'server-state', state, page })
    try {
      const program = await client.program(model.sessionId)
      dispatch({ type: 'program', pretty: program.pretty })
    } catch {
      dispatch({ type: 'program', pretty: null })
    }
  } catch (error) {
    const message = error instanceof ApiError ? error.message : String(error)
    dispatch({ type: 'error', message })
  }
}

function byId(id: string): HTMLElement {
  return document.getElementById(id)!
}

function nodeIdOf(target: EventTarget | null): number | null {
  let element = target as HTMLElement | null
  while (element) {
    const raw = element.dataset?.nodeId
    if (raw !== undefined) return parseInt(raw, 10)
    element = element.parentElement
  }
  return null
}

async function demonstrateOn(nodeId: number, mode: ActionMode, valuePath?: string) {
  const kind = ACTION_KIND_BY_MODE[mode]
  const action: Record<string, unknown> = { kind }
  if (kind !== 'GoBack') action.node_id = nodeId
  if (kind === 'EnterData') {
    if (!valuePath) return
    action.value_path = valuePath
  }
  if (kind === 'SendKeys') {
    const text = window.prompt('text to type')
    if (text === null) return
    action.text = text
  }
  await serverStep(() => client.demonstrate(model.sessionId!, action as never))
}

function render(): void {
  byId('phase').textContent = model.phase
  byId('phase').className = `phase phase-${model.phase}`
  byId('trace-len').textContent = String(model.traceLen)
  byId('error').textContent = model.error ?? ''
  const highlight = highlightedNodeId(model)
  if (model.page) {
    byId('visual').innerHTML = renderVisualView(model.page, highlight)
    byId('tree').innerHTML = renderTreeView(model.page, highlight)
    byId('page-url').textContent = model.page.url ?? ''
  }
  byId('predictions').innerHTML = renderPredictions(model.predictions, model.focused)
  byId('data-panel').innerHTML = renderDataPanel(
    model.inputData == null ? [] : dataCells(model.inputData))
  byId('program').textContent = model.programPretty ?? '(no program yet)'
  byId('scraped').textContent = model.scraped.join('\n')
  const hasPredictions = model.predictions.length > 0
  ;(byId('accept') as HTMLButtonElement).disabled = !hasPredictions || model.busy
  ;(byId('reject') as HTMLButtonElement).disabled = !hasPredictions || model.busy
  ;(byId('auto') as HTMLButtonElement).disabled = model.busy || model.traceLen === 0
}

async function boot(): Promise<void> {
  const { fixtures } = await client.fixtures()
  const picker = byId('fixture') as HTMLSelectElement
  picker.innerHTML = fixtures
    .map((name) => `<option${name === 'store-locator' ? ' selected' : ''}>${name}</option>`)
    .join('')

  byId('start').addEventListener('click', async () => {
    const state = await client.createSession(picker.value)
    dispatch({ type: 'session', state })
  })

  for (const mode of Object.keys(ACTION_KIND_BY_MODE) as ActionMode[]) {
    const button = document.querySelector(`[data-mode="${mode}"]`)
    button?.addEventListener('click', () => {
      dispatch({ type: 'set-mode', mode })
      document.querySelectorAll('[data-mode]').forEach((b) =>
        b.classList.toggle('active', b === button))
    })
  }

  for (const paneId of ['visual', 'tree']) {
    const pane = byId(paneId)
    pane.addEventListener('click', (event) => {
      if (model.mode === 'enter-data') return // enter-data goes via drag-and-drop
      const nodeId = nodeIdOf(event.target)
      if (nodeId !== null) void demonstrateOn(nodeId, model.mode)
    })
    pane.addEventListener('dragover', (event) => event.preventDefault())
    pane.addEventListener('drop', (event) => {
      event.preventDefault()
      const nodeId = nodeIdOf(event.target)
      const path = (event as DragEvent).dataTransfer?.getData('text/value-path')
      if (nodeId !== null && path) void demonstrateOn(nodeId, 'enter-data', path)
    })
  }

  byId('data-panel').addEventListener('dragstart', (event) => {
    const cell = (event.target as HTMLElement).closest('.data-cell') as HTMLElement | null
    if (cell) {
      ;(event as DragEvent).dataTransfer?.setData('text/value-path',
                                                  cell.dataset.valuePath ?? '')
    }
  })

  byId('go-back').addEventListener('click', () => {
    void serverStep(() => client.demonstrate(model.sessionId!, { kind: 'GoBack' }))
  })
  byId('prev').addEventListener('click', () => dispatch({ type: 'focus-move', delta: -1 }))
  byId('next').addEventListener('click', () => dispatch({ type: 'focus-move', delta: 1 }))
  byId('accept').addEventListener('click', () => {
    const prediction = focusedPrediction(model)
    if (prediction) void serverStep(() => client.accept(model.sessionId!, prediction.id))
  })
  byId('reject').addEventListener('click', () => {
    void serverStep(() => client.reject(model.sessionId!))
  })
  byId('auto').addEventListener('click', () => {
    void serverStep(() => client.auto(model.sessionId!))
  })
}

void boot()
