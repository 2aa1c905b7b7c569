// Typed client for the assistant service. The UI talks only to these two
// endpoints and renders their payloads verbatim.

export interface IssueView {
  key: string
  summary: string
  status: string
  url: string
}

export interface PhaseUsageView {
  prompt_tokens: number
  completion_tokens: number
  cost: number | null
}

export interface QueryResultView {
  answer: string | null
  issues: IssueView[]
  jql: string
  selected_fields: string[] | null
  phase_usage: Record<string, PhaseUsageView>
  total_cost: number | null
  currency: string
  warnings: string[]
  retry_count: number
}

export interface MetaView {
  models: string[]
  templates: string[]
  examples: string[]
  default_temperature: number
}

export interface QueryRequest {
  text: string
  complex: boolean
  temperature: number
  template: string
  model: string
}

export interface ApiErrorBody {
  code: string
  message: string
  completions?: string[]
}

export class ApiError extends Error {
  readonly code: string
  readonly completions: string[]

  constructor(body: ApiErrorBody) {
    super(body.message)
    this.code = body.code
    this.completions = body.completions ?? []
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  async fetchMeta(): Promise<MetaView> {
    const res = await fetch(`${this.baseUrl}/api/meta`)
    if (!res.ok) {
      throw new Error(`meta request failed: HTTP ${res.status}`)
    }
    return res.json()
  }

  async postQuery(body: QueryRequest): Promise<QueryResultView> {
    const res = await fetch(`${this.baseUrl}/api/query`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body)
    })
    if (!res.ok) {
      throw new ApiError(await res.json())
    }
    return res.json()
  }
}
