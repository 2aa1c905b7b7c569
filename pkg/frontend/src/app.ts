// Two-panel query interface: a central panel for asking questions and a
// collapsible debug panel for temperature, prompt template, and model.
// Every number shown in the results comes verbatim from the API payload;
// the UI never recomputes counts or costs.

import { ApiClient, ApiError, MetaView, QueryResultView } from './api'

export interface UiState {
  queryText: string
  complexFlag: boolean
  temperature: number
  template: string
  model: string
  busy: boolean
}

export function initApp(root: HTMLElement, api: ApiClient): Promise<void> {
  root.innerHTML = `
    <div class="layout">
      <details id="debug-panel" class="debug-panel">
        <summary>Opciones de depuración</summary>
        <label>Temperatura
          <input id="temperature" type="range" min="0" max="1" step="0.1">
          <span id="temperature-value"></span>
        </label>
        <label>Plantilla
          <select id="template"></select>
        </label>
        <label>Modelo
          <select id="model"></select>
        </label>
      </details>
      <main class="central-panel">
        <p class="hint">Ejemplos de consulta:</p>
        <ul id="examples"></ul>
        <textarea id="query-text" rows="3" placeholder="Escribe tu consulta sobre las incidencias"></textarea>
        <label class="complex">
          <input id="complex-flag" type="checkbox"> Consulta compleja (respuesta en lenguaje natural)
        </label>
        <button id="submit" disabled>Consultar</button>
        <div id="error" class="error" hidden></div>
        <div id="result" hidden></div>
      </main>
    </div>
  `

  const textArea = root.querySelector<HTMLTextAreaElement>('#query-text')!
  const complexFlag = root.querySelector<HTMLInputElement>('#complex-flag')!
  const submit = root.querySelector<HTMLButtonElement>('#submit')!
  const temperature = root.querySelector<HTMLInputElement>('#temperature')!
  const temperatureValue = root.querySelector<HTMLSpanElement>('#temperature-value')!
  const templateSelect = root.querySelector<HTMLSelectElement>('#template')!
  const modelSelect = root.querySelector<HTMLSelectElement>('#model')!
  const errorBox = root.querySelector<HTMLDivElement>('#error')!
  const resultBox = root.querySelector<HTMLDivElement>('#result')!

  let busy = false

  const refreshSubmit = () => {
    submit.disabled = busy || textArea.value.trim() === ''
  }

  textArea.addEventListener('input', refreshSubmit)
  temperature.addEventListener('input', () => {
    temperatureValue.textContent = temperature.value
  })

  submit.addEventListener('click', async () => {
    busy = true
    refreshSubmit()
    errorBox.hidden = true
    try {
      const result = await api.postQuery({
        text: textArea.value,
        complex: complexFlag.checked,
        temperature: Number(temperature.value),
        template: templateSelect.value,
        model: modelSelect.value
      })
      renderResult(resultBox, result)
    } catch (err) {
      renderError(errorBox, err)
      resultBox.hidden = true
    } finally {
      busy = false
      refreshSubmit()
    }
  })

  return api.fetchMeta().then(
    meta => {
      populateFromMeta(root, meta, textArea, refreshSubmit)
    },
    () => {
      errorBox.hidden = false
      errorBox.innerHTML =
        'No se pudo cargar la configuración. <button id="retry-meta">Reintentar</button>'
      errorBox.querySelector('#retry-meta')!.addEventListener('click', () => {
        errorBox.hidden = true
        void initApp(root, api)
      })
    }
  )
}

function populateFromMeta(
  root: HTMLElement,
  meta: MetaView,
  textArea: HTMLTextAreaElement,
  refreshSubmit: () => void
): void {
  const examples = root.querySelector<HTMLUListElement>('#examples')!
  examples.innerHTML = ''
  for (const example of meta.examples) {
    const item = document.createElement('li')
    const link = document.createElement('a')
    link.href = '#'
    link.className = 'example'
    link.textContent = example
    link.addEventListener('click', event => {
      event.preventDefault()
      textArea.value = example
      refreshSubmit()
    })
    item.appendChild(link)
    examples.appendChild(item)
  }

  const templateSelect = root.querySelector<HTMLSelectElement>('#template')!
  templateSelect.innerHTML = ''
  for (const template of meta.templates) {
    templateSelect.appendChild(new Option(template, template))
  }
  templateSelect.value = meta.templates[meta.templates.length - 1]

  const modelSelect = root.querySelector<HTMLSelectElement>('#model')!
  modelSelect.innerHTML = ''
  for (const model of meta.models) {
    modelSelect.appendChild(new Option(model, model))
  }

  const temperature = root.querySelector<HTMLInputElement>('#temperature')!
  temperature.value = String(meta.default_temperature)
  root.querySelector('#temperature-value')!.textContent = temperature.value
}

export function renderResult(box: HTMLElement, result: QueryResultView): void {
  box.hidden = false
  box.innerHTML = ''

  if (result.answer !== null) {
    const answer = document.createElement('p')
    answer.className = 'answer'
    answer.textContent = result.answer
    box.appendChild(answer)
  }

  const list = document.createElement('ul')
  list.className = 'issues'
  for (const issue of result.issues) {
    const item = document.createElement('li')
    item.className = 'issue'
    const link = document.createElement('a')
    link.href = issue.url
    link.className = 'issue-key'
    link.textContent = issue.key
    item.appendChild(link)
    item.appendChild(document.createTextNode(` [${issue.status}] ${issue.summary}`))
    list.appendChild(item)
  }
  box.appendChild(list)

  const jql = document.createElement('p')
  jql.className = 'jql'
  jql.textContent = `JQL: ${result.jql}`
  box.appendChild(jql)

  if (result.selected_fields !== null) {
    const fields = document.createElement('p')
    fields.className = 'fields'
    fields.textContent = `Campos: ${result.selected_fields.join(', ')}`
    box.appendChild(fields)
  }

  const usage = document.createElement('ul')
  usage.className = 'usage'
  for (const [phase, figures] of Object.entries(result.phase_usage)) {
    const row = document.createElement('li')
    row.textContent = `${phase}: ${figures.prompt_tokens} + ${figures.completion_tokens} tokens`
    usage.appendChild(row)
  }
  box.appendChild(usage)

  const cost = document.createElement('p')
  cost.className = 'cost'
  cost.textContent =
    result.total_cost === null
      ? 'Coste: no disponible'
      : `Coste: ${result.total_cost} ${result.currency}`
  box.appendChild(cost)

  for (const warning of result.warnings) {
    const badge = document.createElement('span')
    badge.className = 'warning-badge'
    badge.textContent = warning
    box.appendChild(badge)
  }
}

export function renderError(box: HTMLElement, err: unknown): void {
  box.hidden = false
  box.innerHTML = ''
  const message = document.createElement('p')
  if (err instanceof ApiError) {
    message.textContent = `Error (${err.code}): ${err.message}`
    box.appendChild(message)
    for (const completion of err.completions) {
      const raw = document.createElement('pre')
      raw.className = 'raw-completion'
      raw.textContent = completion
      box.appendChild(raw)
    }
  } else {
    message.textContent = `Error: ${err instanceof Error ? err.message : String(err)}`
    box.appendChild(message)
  }
}
