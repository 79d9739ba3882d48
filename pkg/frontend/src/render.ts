// Pure DOM rendering from server responses. Every function rewrites its
// whole subtree from the given data, so rendering the same response twice
// is idempotent and client state can never drift from the server's.

import type { PredictionView, SessionView } from './api.js'
import { DISPLAY_NAMES, GESTURES, type GestureName } from './gestures.js'

export function displayName(gesture: string): string {
  return DISPLAY_NAMES[gesture as GestureName] ?? gesture
}

export function renderPhase(badge: HTMLElement, session: SessionView | null): void {
  const phase = session?.phase ?? 'No session'
  badge.textContent = phase
  badge.dataset.phase = phase
}

export function renderItems(list: HTMLElement, session: SessionView | null): void {
  list.textContent = ''
  const items = session?.items ?? []
  for (const item of items) {
    const li = document.createElement('li')
    li.textContent = displayName(item)
    list.appendChild(li)
  }
  if (items.length === 0) {
    const li = document.createElement('li')
    li.className = 'empty'
    li.textContent = '(no items)'
    list.appendChild(li)
  }
}

export function renderReceipt(receipt: HTMLElement, session: SessionView | null): void {
  const completed = session?.phase === 'Completed'
  receipt.hidden = !completed
  receipt.textContent = ''
  if (!completed || !session) return
  const title = document.createElement('h3')
  title.textContent = 'Receipt'
  const list = document.createElement('ul')
  list.className = 'receipt-items'
  for (const item of session.items) {
    const li = document.createElement('li')
    li.textContent = displayName(item)
    list.appendChild(li)
  }
  const payment = document.createElement('p')
  payment.className = 'receipt-payment'
  payment.textContent = `Paid with ${session.payment ? displayName(session.payment) : '?'}`
  receipt.append(title, list, payment)
}

export function renderEventLog(log: HTMLElement, session: SessionView | null): void {
  log.textContent = ''
  const events = session?.event_log ?? []
  // newest first, capped for readability
  for (const event of events.slice(-30).reverse()) {
    const li = document.createElement('li')
    li.className = event.accepted ? 'accepted' : 'rejected'
    li.textContent = `${displayName(event.gesture)} ${event.accepted ? 'accepted' : 'rejected'} -> ${event.phase}`
    log.appendChild(li)
  }
}

export function renderSession(root: HTMLElement, session: SessionView | null): void {
  renderPhase(root.querySelector('#phase-badge') as HTMLElement, session)
  renderItems(root.querySelector('#items-list') as HTMLElement, session)
  renderReceipt(root.querySelector('#receipt') as HTMLElement, session)
  renderEventLog(root.querySelector('#event-log') as HTMLElement, session)
  const payment = root.querySelector('#payment-line') as HTMLElement
  payment.textContent = session?.payment ? `Payment: ${displayName(session.payment)}` : ''
}

export function renderPrediction(
  panel: HTMLElement,
  prediction: PredictionView | null,
): void {
  const label = panel.querySelector('#prediction-label') as HTMLElement
  label.textContent = prediction ? displayName(prediction.label) : '—'
  const bars = panel.querySelector('#score-bars') as HTMLElement
  bars.textContent = ''
  for (const gesture of GESTURES) {
    const score = prediction?.scores[gesture] ?? 0
    const row = document.createElement('div')
    row.className = 'score-row'
    row.dataset.gesture = gesture
    const name = document.createElement('span')
    name.className = 'score-name'
    name.textContent = displayName(gesture)
    const track = document.createElement('span')
    track.className = 'score-track'
    const fill = document.createElement('span')
    fill.className = 'score-fill'
    fill.style.width = `${Math.round(score * 100)}%`
    track.appendChild(fill)
    const value = document.createElement('span')
    value.className = 'score-value'
    value.textContent = score.toFixed(2)
    row.append(name, track, value)
    bars.appendChild(row)
  }
}

export function renderFeatureReadout(readout: HTMLElement, features: number[]): void {
  readout.textContent = features.map((v) => v.toFixed(2)).join(' ')
}
