// UI state and its transitions, kept pure so every rule is testable
// without a DOM or a server:
//
//   * the grid always shows exactly the actions last received from the
//     server for the current step — never reordered, never filtered;
//   * ranking responses for an older step (or a superseded request)
//     are discarded;
//   * typing alone changes intent_text and styling, nothing else;
//   * at most one act request is in flight, and it is exclusive.

import type {
  ActResponse,
  ActionView,
  IntentResponse,
  RankedView,
  SessionCreated,
  TranscriptRow,
} from "./api.js";

export interface UiState {
  session_id: string | null;
  step: number;
  intent_text: string;
  /** Grid contents: the server's action list for the current step. */
  actions: ActionView[];
  /** Ranked styling for the grid; null renders every button neutral. */
  ranked: RankedView[] | null;
  transcript: TranscriptRow[];
  /** True while an act request is in flight (clicks are ignored). */
  pending_act: boolean;
  banner: string | null;
}

export function initialState(): UiState {
  return {
    session_id: null,
    step: 0,
    intent_text: "",
    actions: [],
    ranked: null,
    transcript: [],
    pending_act: false,
    banner: null,
  };
}

export function sessionStarted(state: UiState, resp: SessionCreated): UiState {
  return {
    ...initialState(),
    session_id: resp.session_id,
    step: resp.step,
    actions: resp.actions,
  };
}

/** Typing: only the text (and neutral-vs-ranked styling) may change. */
export function intentEdited(state: UiState, text: string): UiState {
  return {
    ...state,
    intent_text: text,
    ranked: text.trim() === "" ? null : state.ranked,
  };
}

/**
 * A ranking response landed. It only applies when it was computed for
 * the step the grid is still showing; anything else is stale.
 */
export function rankingArrived(
  state: UiState,
  forStep: number,
  resp: IntentResponse,
): UiState {
  if (forStep !== state.step || resp.step !== state.step) {
    return state;
  }
  if (state.intent_text.trim() === "") {
    return state; // the field was cleared while the request ran
  }
  return { ...state, ranked: resp.ranked, banner: null };
}

/** Ranking failed; keep the grid usable with neutral styling. */
export function rankingFailed(state: UiState, message: string): UiState {
  return { ...state, ranked: null, banner: message };
}

export function actStarted(state: UiState): UiState {
  return { ...state, pending_act: true };
}

/** An act succeeded: new turn, fresh grid, cleared intent. */
export function actCompleted(state: UiState, resp: ActResponse): UiState {
  return {
    ...state,
    step: resp.event.step + 1,
    intent_text: "",
    actions: resp.actions,
    ranked: null,
    transcript: [...state.transcript, resp.event],
    pending_act: false,
    banner: null,
  };
}

export function actFailed(state: UiState, message: string): UiState {
  return { ...state, pending_act: false, banner: message };
}

/** Re-sync after a stale-action error: adopt the server's view. */
export function gridRefreshed(
  state: UiState,
  step: number,
  actions: ActionView[],
  transcript: TranscriptRow[],
): UiState {
  return {
    ...state,
    step,
    actions,
    ranked: null,
    transcript,
    pending_act: false,
  };
}
