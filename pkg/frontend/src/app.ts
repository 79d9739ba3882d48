// Application wiring: builds the UI inside a root element and routes every
// interaction through the HTTP API. Requests that touch the session run
// strictly one at a time; classification calls are debounced.

import { ApiError, BartenderApi, type FetchLike, type SessionView } from './api.js'
import { FINGERS, GESTURES, POSE_TEMPLATES, type GestureName } from './gestures.js'
import {
  displayName,
  renderFeatureReadout,
  renderPrediction,
  renderSession,
} from './render.js'

export interface AppOptions {
  fetchImpl?: FetchLike
  baseUrl?: string
  debounceMs?: number
}

export interface AppHandle {
  api: BartenderApi
  root: HTMLElement
  ready: Promise<void>
  newSession(): Promise<void>
  flushClassify(): Promise<void>
  sliderValues(): number[]
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag)
  for (const [key, value] of Object.entries(attrs)) {
    if (key === 'class') node.className = value
    else node.setAttribute(key, value)
  }
  if (text) node.textContent = text
  return node
}

function buildDom(root: HTMLElement): void {
  root.textContent = ''
  const banner = el('div', { id: 'banner', hidden: '' })
  banner.append(
    el('span', { class: 'banner-message' }),
    el('button', { class: 'banner-dismiss', type: 'button' }, 'dismiss'),
  )

  const sessionPanel = el('section', { id: 'session-panel' })
  const header = el('div', { class: 'session-header' })
  header.append(
    el('h2', {}, 'Order'),
    el('span', { id: 'phase-badge', class: 'badge' }),
    el('button', { id: 'new-session', type: 'button' }, 'New session'),
  )
  const palette = el('div', { id: 'palette' })
  for (const gesture of GESTURES) {
    palette.appendChild(
      el(
        'button',
        { class: 'palette-btn', type: 'button', 'data-gesture': gesture },
        displayName(gesture),
      ),
    )
  }
  sessionPanel.append(
    header,
    el('div', { id: 'notice', hidden: '' }),
    el('ul', { id: 'items-list' }),
    el('p', { id: 'payment-line' }),
    el('div', { id: 'receipt', hidden: '' }),
    el('h3', {}, 'Gestures'),
    palette,
    el('h3', {}, 'History'),
    el('ol', { id: 'event-log' }),
  )

  const posePanel = el('section', { id: 'pose-panel' })
  posePanel.appendChild(el('h2', {}, 'Pose editor'))
  const presets = el('select', { id: 'preset-select' })
  presets.appendChild(el('option', { value: '' }, 'load a template…'))
  for (const gesture of GESTURES) {
    presets.appendChild(el('option', { value: gesture }, displayName(gesture)))
  }
  posePanel.appendChild(presets)
  const sliders = el('div', { id: 'sliders' })
  for (const hand of ['left', 'right'] as const) {
    const column = el('div', { class: `hand hand-${hand}` })
    column.appendChild(el('h4', {}, hand === 'left' ? 'Left hand' : 'Right hand'))
    FINGERS.forEach((finger, fingerIdx) => {
      const index = (hand === 'left' ? 0 : 5) + fingerIdx
      const row = el('label', { class: 'slider-row' })
      row.append(
        el('span', { class: 'slider-name' }, finger),
        el('input', {
          class: 'pose-slider',
          type: 'range',
          min: '0',
          max: '1',
          step: '0.01',
          value: '0.5',
          'data-index': String(index),
        }),
      )
      column.appendChild(row)
    })
    sliders.appendChild(column)
  }
  posePanel.append(
    sliders,
    el('p', { id: 'features-readout', class: 'mono' }),
    el('div', { id: 'pose-error', hidden: '' }),
    el('div', { class: 'prediction' }),
    el('button', { id: 'apply-pose', type: 'button' }, 'Apply to order'),
    el('p', { id: 'model-info' }),
  )
  const prediction = posePanel.querySelector('.prediction') as HTMLElement
  prediction.append(
    el('h3', {}, 'Prediction'),
    el('p', { id: 'prediction-label' }, '—'),
    el('div', { id: 'score-bars' }),
  )

  const main = el('main', { id: 'bartender' })
  main.append(sessionPanel, posePanel)
  root.append(banner, main)
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): AppHandle {
  const api = new BartenderApi(options.fetchImpl, options.baseUrl ?? '')
  const debounceMs = options.debounceMs ?? 150
  buildDom(root)

  const banner = root.querySelector('#banner') as HTMLElement
  const notice = root.querySelector('#notice') as HTMLElement
  const poseError = root.querySelector('#pose-error') as HTMLElement
  const readout = root.querySelector('#features-readout') as HTMLElement
  const posePanel = root.querySelector('#pose-panel') as HTMLElement
  const sliderInputs = Array.from(
    root.querySelectorAll<HTMLInputElement>('.pose-slider'),
  ).sort((a, b) => Number(a.dataset.index) - Number(b.dataset.index))

  let session: SessionView | null = null
  // session requests run strictly in sequence (single session per tab)
  let chain: Promise<unknown> = Promise.resolve()
  let classifyTimer: ReturnType<typeof setTimeout> | undefined

  const showBanner = (message: string) => {
    banner.hidden = false
    ;(banner.querySelector('.banner-message') as HTMLElement).textContent = message
  }
  const clearBanner = () => {
    banner.hidden = true
    ;(banner.querySelector('.banner-message') as HTMLElement).textContent = ''
  }
  ;(banner.querySelector('.banner-dismiss') as HTMLElement).addEventListener(
    'click',
    clearBanner,
  )

  const showNotice = (message: string) => {
    notice.hidden = false
    notice.textContent = message
  }
  const clearNotice = () => {
    notice.hidden = true
    notice.textContent = ''
  }

  const renderAll = () => renderSession(root, session)

  const describeError = (err: unknown): string =>
    err instanceof ApiError
      ? `${err.code}: ${err.message}`
      : 'network error: the service is unreachable'

  const enqueue = <T>(task: () => Promise<T>): Promise<T> => {
    const next = chain.then(task, task)
    chain = next.then(
      () => undefined,
      () => undefined,
    )
    return next
  }

  const sliderValues = () => sliderInputs.map((input) => Number(input.value))

  const runClassify = async (): Promise<void> => {
    try {
      const prediction = await api.classify(sliderValues())
      poseError.hidden = true
      poseError.textContent = ''
      renderPrediction(posePanel, prediction)
    } catch (err) {
      // the prediction display keeps its previous server-backed state
      poseError.hidden = false
      poseError.textContent = describeError(err)
    }
  }

  const scheduleClassify = () => {
    renderFeatureReadout(readout, sliderValues())
    if (classifyTimer !== undefined) clearTimeout(classifyTimer)
    classifyTimer = setTimeout(() => void runClassify(), debounceMs)
  }

  const flushClassify = async (): Promise<void> => {
    if (classifyTimer !== undefined) {
      clearTimeout(classifyTimer)
      classifyTimer = undefined
    }
    await runClassify()
  }

  const applyGestureBody = (body: Parameters<BartenderApi['sendGesture']>[1]) =>
    enqueue(async () => {
      if (!session) throw new ApiError(0, 'no_session', 'no active session')
      const response = await api.sendGesture(session.id, body)
      session = response.session
      renderAll()
      if (!response.outcome.accepted) {
        const reason = response.outcome.reason || 'not allowed now'
        showNotice(`rejected: ${reason}`)
      } else {
        clearNotice()
      }
      if (response.prediction) renderPrediction(posePanel, response.prediction)
      clearBanner()
    }).catch((err) => {
      showBanner(describeError(err))
    })

  const newSession = (): Promise<void> =>
    enqueue(async () => {
      const { id } = await api.createSession()
      session = await api.getSession(id)
      renderAll()
      clearNotice()
      clearBanner()
    }).catch((err) => {
      showBanner(describeError(err))
    })

  for (const button of Array.from(root.querySelectorAll<HTMLElement>('.palette-btn'))) {
    button.addEventListener('click', () => {
      void applyGestureBody({ gesture: button.dataset.gesture as GestureName })
    })
  }
  ;(root.querySelector('#new-session') as HTMLElement).addEventListener('click', () => {
    void newSession()
  })
  ;(root.querySelector('#apply-pose') as HTMLElement).addEventListener('click', () => {
    void applyGestureBody({ features: sliderValues() })
  })
  for (const input of sliderInputs) {
    input.addEventListener('input', scheduleClassify)
  }
  ;(root.querySelector('#preset-select') as HTMLSelectElement).addEventListener(
    'change',
    (event) => {
      const value = (event.target as HTMLSelectElement).value as GestureName | ''
      if (!value) return
      POSE_TEMPLATES[value].forEach((v, i) => {
        sliderInputs[i].value = String(v)
      })
      scheduleClassify()
    },
  )

  renderAll()
  renderPrediction(posePanel, null)
  renderFeatureReadout(readout, sliderValues())

  const ready = (async () => {
    try {
      const info = await api.modelInfo()
      ;(root.querySelector('#model-info') as HTMLElement).textContent = info.loaded
        ? `model: ${info.kind}`
        : 'no model loaded'
    } catch (err) {
      showBanner(describeError(err))
    }
    await newSession()
  })()

  return { api, root, ready, newSession, flushClassify, sliderValues }
}
