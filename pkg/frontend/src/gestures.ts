// The eight gestures in their stable order, plus slider presets mirroring
// the server's default pose templates (positions 0-4 left hand thumb..pinky,
// 5-9 right hand).

export const GESTURES = [
  'Init',
  'Alcohol',
  'NonAlcohol',
  'Food',
  'Undo',
  'Checkout',
  'Cash',
  'Credit',
] as const

export type GestureName = (typeof GESTURES)[number]

export const DISPLAY_NAMES: Record<GestureName, string> = {
  Init: 'Init',
  Alcohol: 'Alcohol',
  NonAlcohol: 'Non-Alcohol',
  Food: 'Food',
  Undo: 'Undo',
  Checkout: 'Checkout',
  Cash: 'Cash',
  Credit: 'Credit',
}

export const ITEM_GESTURES: GestureName[] = ['Alcohol', 'NonAlcohol', 'Food']

export const POSE_TEMPLATES: Record<GestureName, number[]> = {
  Init: [0, 1, 1, 1, 1, 0, 1, 1, 1, 1],
  Alcohol: [0, 1, 1, 1, 1, 0, 1, 0, 0, 0],
  NonAlcohol: [0, 1, 1, 1, 1, 0, 1, 1, 1, 0],
  Food: [0, 1, 1, 1, 1, 0, 1, 1, 0, 0],
  Undo: [0, 1, 0, 0, 0, 1, 1, 0, 0, 0],
  Checkout: [1, 1, 0, 0, 0, 1, 1, 0, 0, 0],
  Cash: [1, 0, 0, 0, 0, 1, 0, 0, 0, 0],
  Credit: [0, 1, 1, 1, 1, 1, 1, 0, 0, 1],
}

export const FINGERS = ['thumb', 'index', 'middle', 'ring', 'pinky'] as const
