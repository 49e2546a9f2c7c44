// Button styling math: intensity -> background shade, enlargement, and
// the light-on-dark contrast flip. Pure functions over theme constants
// so every visual rule is unit-testable without a DOM.

/** Light end of the background ramp (intensity 0). */
export const LIGHT_SHADE = "#f4f1ea";
/** Dark end of the background ramp (intensity 1). */
export const DARK_SHADE = "#1f4d3a";
/** Background of a button when no intent is being ranked. */
export const NEUTRAL_SHADE = "#e8e8e4";
/** Text colors on either side of the contrast flip. */
export const DARK_TEXT = "#1a1a1a";
export const LIGHT_TEXT = "#f8f8f6";
/** Above this intensity the text flips to light-on-dark. */
export const CONTRAST_FLIP = 0.6;
/** Font and padding multiplier for top-K buttons. */
export const ENLARGED_SCALE = 1.25;

export interface ButtonStyle {
  background: string;
  color: string;
  /** Multiplier applied to both font size and padding. */
  scale: number;
}

function channels(hex: string): [number, number, number] {
  const value = parseInt(hex.slice(1), 16);
  return [(value >> 16) & 0xff, (value >> 8) & 0xff, value & 0xff];
}

function toHex(rgb: [number, number, number]): string {
  return "#" + rgb.map((c) => c.toString(16).padStart(2, "0")).join("");
}

/** Linear interpolation between two hex colors, t in [0, 1]. */
export function mixHex(from: string, to: string, t: number): string {
  const a = channels(from);
  const b = channels(to);
  const mixed = a.map((c, i) => Math.round(c + (b[i]! - c) * t)) as [
    number,
    number,
    number,
  ];
  return toHex(mixed);
}

/**
 * Style for one action button.
 *
 * intensity null means "no intent being ranked" (empty input): neutral
 * background, regular size. Otherwise the background interpolates from
 * LIGHT_SHADE to DARK_SHADE and the text flips to light once the
 * background is dark enough to need it.
 */
export function buttonStyle(intensity: number | null, enlarged: boolean): ButtonStyle {
  if (intensity === null) {
    return { background: NEUTRAL_SHADE, color: DARK_TEXT, scale: 1 };
  }
  const clamped = Math.max(0, Math.min(1, intensity));
  return {
    background: mixHex(LIGHT_SHADE, DARK_SHADE, clamped),
    color: clamped > CONTRAST_FLIP ? LIGHT_TEXT : DARK_TEXT,
    scale: enlarged ? ENLARGED_SCALE : 1,
  };
}
