// Typed client for the bartender service JSON contract. The UI performs no
// classification or session logic itself: every state change goes through
// these calls and the server response is the single source of truth.

export interface OutcomeView {
  accepted: boolean
  reason: string
}

export interface SessionEventView {
  timestamp_ms: number
  gesture: string
  accepted: boolean
  phase: string
}

export interface SessionView {
  id: string
  phase: string
  items: string[]
  payment: string | null
  event_log: SessionEventView[]
}

export interface PredictionView {
  label: string
  scores: Record<string, number>
}

export interface GestureResponse {
  prediction: PredictionView | null
  outcome: OutcomeView
  session: SessionView
}

export interface ModelInfo {
  loaded: boolean
  kind: string | null
  trained_on: string | null
  class_list: string[] | null
}

export type GestureBody = { gesture: string } | { features: number[] }

export class ApiError extends Error {
  readonly code: string
  readonly status: number

  constructor(status: number, code: string, message: string) {
    super(message)
    this.code = code
    this.status = status
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>

async function parseOrThrow<T>(response: Response): Promise<T> {
  let body: unknown = null
  try {
    body = await response.json()
  } catch {
    body = null
  }
  if (!response.ok) {
    const err = (body ?? {}) as { code?: string; message?: string }
    throw new ApiError(
      response.status,
      err.code ?? 'unknown_error',
      err.message ?? `request failed with status ${response.status}`,
    )
  }
  return body as T
}

export class BartenderApi {
  private readonly fetchImpl: FetchLike
  private readonly baseUrl: string

  constructor(fetchImpl?: FetchLike, baseUrl = '') {
    // bind so a bare window.fetch keeps its receiver
    const impl = fetchImpl ?? ((input, init) => fetch(input, init))
    this.fetchImpl = impl
    this.baseUrl = baseUrl
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.fetchImpl(this.baseUrl + path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(payload),
    }).then((r) => parseOrThrow<T>(r))
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchImpl(this.baseUrl + path).then((r) => parseOrThrow<T>(r))
  }

  createSession(): Promise<{ id: string }> {
    return this.post('/api/sessions', {})
  }

  getSession(id: string): Promise<SessionView> {
    return this.get(`/api/sessions/${id}`)
  }

  sendGesture(id: string, body: GestureBody): Promise<GestureResponse> {
    return this.post(`/api/sessions/${id}/gesture`, body)
  }

  classify(features: number[]): Promise<PredictionView> {
    return this.post('/api/classify', { features })
  }

  modelInfo(): Promise<ModelInfo> {
    return this.get('/api/model')
  }
}
