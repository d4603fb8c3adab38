/** Dashboard view state and the stale-response guard.
 *
 * One UI thread, at most one in-flight request per panel: each request
 * takes a ticket from RequestGate and a response is applied only if its
 * ticket is still the latest for that panel. */

import type { CompareKey, Panel } from "./panels.js";

export interface ViewState {
  course: string | null;
  panel: Panel;
  compareX: CompareKey;
  compareY: CompareKey;
  sqrtAxis: boolean;
  video: string | null;
}

export function initialState(): ViewState {
  return {
    course: null,
    panel: "funnel",
    compareX: "posts",
    compareY: "quiz_mean",
    sqrtAxis: true,
    video: null,
  };
}

/** The compare panel refuses to query identical axes. */
export function compareSelectionValid(state: ViewState): boolean {
  return state.compareX !== state.compareY;
}

export class RequestGate {
  private latest = new Map<string, number>();

  /** Take a ticket for a panel request. */
  begin(panel: string): number {
    const next = (this.latest.get(panel) ?? 0) + 1;
    this.latest.set(panel, next);
    return next;
  }

  /** True while no newer request for the panel has started. */
  isCurrent(panel: string, ticket: number): boolean {
    return this.latest.get(panel) === ticket;
  }
}
