// Rating session state machine, independent of the DOM.
//
// Invariants the UI relies on:
//  - at most one submission is in flight; extra submit() calls while a
//    POST is pending are ignored, so rapid keypresses cannot double-rate
//  - a failed POST keeps the chosen rating and moves to a retry screen;
//    nothing is silently dropped
//  - the exemplar strip is loaded once and never changes mid-session

import { Exemplar, NextResponse, RatingApi, isDone } from "./api.js";

export type Screen =
  | { kind: "loading" }
  | { kind: "rating"; imageId: string; imageUrl: string; rated: number; total: number }
  | { kind: "retry"; imageId: string; imageUrl: string; fst: number; rated: number; total: number; message: string }
  | { kind: "done"; rated: number; total: number }
  | { kind: "error"; message: string };

export class RatingSession {
  screen: Screen = { kind: "loading" };
  exemplars: Exemplar[] = [];
  onChange: (screen: Screen) => void = () => {};

  private inflight = false;

  constructor(
    private api: RatingApi,
    readonly raterId: string,
    readonly variant: string,
  ) {}

  async start(): Promise<void> {
    try {
      this.exemplars = await this.api.exemplars();
      this.setScreen(await this.advance());
    } catch (err) {
      this.setScreen({ kind: "error", message: String(err) });
    }
  }

  // Submit the rating for the image on screen; on ack, advance.
  async submit(fst: number): Promise<void> {
    if (this.screen.kind !== "rating" || this.inflight) {
      return;
    }
    if (!Number.isInteger(fst) || fst < 1 || fst > 6) {
      return;
    }
    const current = this.screen;
    this.inflight = true;
    try {
      await this.api.submit({
        image_id: current.imageId,
        rater_id: this.raterId,
        fst,
        tool_variant: this.variant,
      });
      this.setScreen(await this.advance());
    } catch (err) {
      this.setScreen({
        kind: "retry",
        imageId: current.imageId,
        imageUrl: current.imageUrl,
        fst,
        rated: current.rated,
        total: current.total,
        message: String(err),
      });
    } finally {
      this.inflight = false;
    }
  }

  // Re-send the rating kept from a failed submission.
  async retry(): Promise<void> {
    if (this.screen.kind !== "retry" || this.inflight) {
      return;
    }
    const pending = this.screen;
    this.inflight = true;
    try {
      await this.api.submit({
        image_id: pending.imageId,
        rater_id: this.raterId,
        fst: pending.fst,
        tool_variant: this.variant,
      });
      this.setScreen(await this.advance());
    } catch (err) {
      this.setScreen({ ...pending, message: String(err) });
    } finally {
      this.inflight = false;
    }
  }

  private async advance(): Promise<Screen> {
    const next: NextResponse = await this.api.next(this.raterId, this.variant);
    if (isDone(next)) {
      return { kind: "done", rated: next.rated, total: next.total };
    }
    return {
      kind: "rating",
      imageId: next.image_id,
      imageUrl: next.url,
      rated: next.rated,
      total: next.total,
    };
  }

  private setScreen(screen: Screen): void {
    this.screen = screen;
    this.onChange(screen);
  }
}
