// Thin REST client for the session service.

import type { ActionJson, SessionStateJson, TreeJson } from './types.js'

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message)
  }
}

export class Client {
  constructor(private base: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    })
    const payload = await response.json().catch(() => ({}))
    if (!response.ok) {
      const detail = (payload as { detail?: string }).detail ?? response.statusText
      throw new ApiError(response.status, detail)
    }
    return payload as T
  }

  fixtures(): Promise<{ fixtures: string[] }> {
    return this.request('GET', '/fixtures')
  }

  createSession(fixture?: string): Promise<SessionStateJson> {
    return this.request('POST', '/sessions', fixture ? { fixture } : {})
  }

  page(sessionId: string): Promise<TreeJson> {
    return this.request('GET', `/sessions/${sessionId}/page`)
  }

  predictions(sessionId: string): Promise<SessionStateJson> {
    return this.request('GET', `/sessions/${sessionId}/predictions`)
  }

  demonstrate(sessionId: string, action: ActionJson & { node_id?: number }):
      Promise<SessionStateJson> {
    return this.request('POST', `/sessions/${sessionId}/demonstrate`, action)
  }

  accept(sessionId: string, predictionId: number): Promise<SessionStateJson> {
    return this.request('POST', `/sessions/${sessionId}/accept`,
                        { prediction_id: predictionId })
  }

  reject(sessionId: string): Promise<SessionStateJson> {
    return this.request('POST', `/sessions/${sessionId}/reject`)
  }

  auto(sessionId: string, stepLimit = 200): Promise<SessionStateJson> {
    return this.request('POST', `/sessions/${sessionId}/auto`, { step_limit: stepLimit })
  }

  program(sessionId: string): Promise<{ program: unknown; pretty: string }> {
    return this.request('GET', `/sessions/${sessionId}/program`)
  }
}
