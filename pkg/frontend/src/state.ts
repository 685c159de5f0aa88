// Pure view-model: every state change is an event, most of them echoes of
// server responses. The UI renders only what the server confirmed.

import type { ActionMode, PredictionJson, SessionStateJson, TreeJson } from './types.js'

export interface ViewModel {
  sessionId: string | null
  fixture: string | null
  phase: string
  page: TreeJson | null
  inputData: unknown
  traceLen: number
  predictions: PredictionJson[]
  focused: number
  mode: ActionMode
  programPretty: string | null
  scraped: string[]
  error: string | null
  busy: boolean
}

export type UiEvent =
  | { type: 'session'; state: SessionStateJson }
  | { type: 'server-state'; state: SessionStateJson; page: TreeJson }
  | { type: 'program'; pretty: string | null }
  | { type: 'set-mode'; mode: ActionMode }
  | { type: 'focus-move'; delta: number }
  | { type: 'error'; message: string }
  | { type: 'busy'; busy: boolean }

export function initialModel(): ViewModel {
  return {
    sessionId: null,
    fixture: null,
    phase: 'demonstration',
    page: null,
    inputData: null,
    traceLen: 0,
    predictions: [],
    focused: 0,
    mode: 'click',
    programPretty: null,
    scraped: [],
    error: null,
    busy: false,
  }
}

export function reduce(model: ViewModel, event: UiEvent): ViewModel {
  switch (event.type) {
    case 'session':
      return {
        ...initialModel(),
        sessionId: event.state.session_id,
        fixture: event.state.fixture,
        phase: event.state.phase,
        page: event.state.page ?? null,
        inputData: event.state.input_data ?? null,
        traceLen: event.state.trace_len,
        predictions: event.state.predictions,
        scraped: event.state.scraped,
        mode: model.mode,
      }
    case 'server-state':
      return {
        ...model,
        phase: event.state.phase,
        traceLen: event.state.trace_len,
        predictions: event.state.predictions,
        focused: 0,
        page: event.page,
        scraped: event.state.scraped,
        error: null,
        busy: false,
      }
    case 'program':
      return { ...model, programPretty: event.pretty }
    case 'set-mode':
      return { ...model, mode: event.mode }
    case 'focus-move': {
      const count = model.predictions.length
      if (count === 0) return model
      const focused = (model.focused + event.delta + count) % count
      return { ...model, focused }
    }
    case 'error':
      return { ...model, error: event.message, busy: false }
    case 'busy':
      return { ...model, busy: event.busy }
  }
}

/** The prediction currently under review, if any. */
export function focusedPrediction(model: ViewModel): PredictionJson | null {
  if (!model.predictions.length) return null
  return model.predictions[Math.min(model.focused, model.predictions.length - 1)]
}

/** Node to highlight on the page: always the server-reported target. */
export function highlightedNodeId(model: ViewModel): number | null {
  const prediction = focusedPrediction(model)
  return prediction ? prediction.target_node_id : null
}
