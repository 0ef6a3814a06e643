// Response shapes of the /v1 JSON API. The client renders these
// verbatim; it never recomputes ranks, frontiers or filtered sets.

export interface SlsTriple {
  tag: string;
  pt: number;
  tl: number;
  td: number;
}

export interface StageOut {
  name: string;
  sls: string;
}

export interface BoardRow {
  rank: number | null;
  id: string;
  team: string;
  entries: number;
  date: string;
  sls: SlsTriple;
  metrics: Record<string, number>;
  stages: StageOut[] | null;
  report_url: string | null;
  caveats: string | null;
  anonymous: boolean;
  semi_supervised: boolean;
  cohort: string | null;
}

export interface LeaderboardPayload {
  task_id: string;
  task_name: string;
  primary_metric: string;
  metrics: string[];
  count: number;
  rows: BoardRow[];
}

export interface DominanceWitness {
  dominator: string;
  dominated: string;
  metric_delta: number;
  sls_delta: Record<string, number>;
}

export interface FrontierPayload {
  task_id: string;
  primary_metric: string;
  count: number;
  frontier: string[];
  dominated: { id: string; witness: DominanceWitness }[];
}

export interface DescribeEntry {
  dimension: "PT" | "TL" | "TD";
  level: number;
  text: string;
  source: "canonical" | "override";
}

export interface DescribePayload {
  task_id: string | null;
  tag: string;
  sls: SlsTriple;
  descriptions: DescribeEntry[];
}

export interface TaskSummary {
  task_id: string;
  task_name: string;
  submissions: number;
}

export interface ApiIssue {
  code: string;
  message: string;
  field: string | null;
  row: number | null;
  submission_id: string | null;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: ApiIssue[];
}

export interface SubmitAccepted {
  accepted: boolean;
  submission: Record<string, unknown>;
  warnings: ApiIssue[];
}
