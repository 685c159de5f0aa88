// Wire types mirroring the session service's JSON payloads.

export interface NodeJson {
  tag: string
  attrs: Record<string, string>
  text: string | null
  children: NodeJson[]
}

export interface TreeJson {
  url: string | null
  root: NodeJson
}

export interface ActionJson {
  kind: string
  selector?: string
  text?: string
  value_path?: string
}

export interface PredictionJson {
  id: number
  action: ActionJson
  target_node_id: number | null
  selector_absolute: string | null
  program_key: string
  program: unknown
  program_pretty: string | null
}

export interface SessionStateJson {
  session_id: string
  fixture: string
  phase: string
  trace_len: number
  predictions: PredictionJson[]
  scraped: string[]
  page?: TreeJson
  input_data?: unknown
  applied?: number
  reason?: string
}

export type ActionMode =
  | 'click'
  | 'scrape-text'
  | 'scrape-link'
  | 'enter-data'
  | 'send-keys'
  | 'go-back'

export const ACTION_KIND_BY_MODE: Record<ActionMode, string> = {
  'click': 'Click',
  'scrape-text': 'ScrapeText',
  'scrape-link': 'ScrapeLink',
  'enter-data': 'EnterData',
  'send-keys': 'SendKeys',
  'go-back': 'GoBack',
}
