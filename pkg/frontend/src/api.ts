// Typed client for the rating service HTTP API.

export interface NextImage {
  image_id: string;
  url: string;
  rated: number;
  total: number;
}

export interface SessionDone {
  done: true;
  rated: number;
  total: number;
}

export type NextResponse = NextImage | SessionDone;

export function isDone(r: NextResponse): r is SessionDone {
  return (r as SessionDone).done === true;
}

export interface Exemplar {
  label: number;
  name: string;
  url: string;
}

export interface RatingSubmission {
  image_id: string;
  rater_id: string;
  fst: number;
  tool_variant: string;
}

export interface RatingApi {
  next(rater: string, variant: string): Promise<NextResponse>;
  exemplars(): Promise<Exemplar[]>;
  submit(rating: RatingSubmission): Promise<void>;
}

export class HttpRatingApi implements RatingApi {
  constructor(private base: string = "") {}

  async next(rater: string, variant: string): Promise<NextResponse> {
    const params = new URLSearchParams({ rater, variant });
    return this.json(await fetch(`${this.base}/api/next?${params}`));
  }

  async exemplars(): Promise<Exemplar[]> {
    return this.json(await fetch(`${this.base}/api/exemplars`));
  }

  async submit(rating: RatingSubmission): Promise<void> {
    const resp = await fetch(`${this.base}/api/ratings`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(rating),
    });
    if (!resp.ok) {
      throw new Error(`submit failed: HTTP ${resp.status}`);
    }
  }

  private async json(resp: Response): Promise<any> {
    if (!resp.ok) {
      throw new Error(`request failed: HTTP ${resp.status}`);
    }
    return resp.json();
  }
}
