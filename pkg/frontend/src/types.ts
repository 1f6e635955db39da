// Wire and layout documents exchanged with the session service.

export interface ScreenDoc {
  width_px: number;
  height_px: number;
  center: [number, number];
  px_per_degree: number;
}

export interface ParamsDoc {
  idle_radius_px: number;
  key_ring_radius_px: number;
  move_distance_px: number;
  lp_move_distance_px: number;
  arrow_distance_px: number;
  move_speed_px_s: number;
  search_threshold_ms: number;
  arrow_extra_samples: number;
}

export interface KeyDoc {
  id: string;
  cluster_index: number;
  home_position: [number, number];
  trajectory_angle_deg: number;
  travel_px: number;
}

export interface ClusterDoc {
  index: number;
  sector_start_deg: number;
  sector_width_deg: number;
  keys: KeyDoc[];
}

export interface LayoutDoc {
  variant: string;
  revision: string;
  screen: ScreenDoc;
  params: ParamsDoc;
  clusters: ClusterDoc[];
}

export interface LayoutMessage {
  type: "layout";
  session_id: string;
  layout: LayoutDoc;
}

export interface EventMessage {
  type: "event";
  session_id: string;
  t_ms: number;
  kind: string;
  payload: unknown;
}

export interface PredictionsMessage {
  type: "predictions";
  session_id: string;
  slots: { up: string; left: string; right: string };
  top_letters: string[];
  mode: string;
  buffer: string;
}

export interface MetricsMessage {
  type: "metrics";
  session_id: string;
  wpm: number;
  cer: number;
  uer: number;
  ks: number;
  commits: number;
}

export interface ErrorMessage {
  type: "error";
  session_id: string | null;
  message: string;
}

export type ServerMessage =
  | LayoutMessage
  | EventMessage
  | PredictionsMessage
  | MetricsMessage
  | ErrorMessage;

export interface GazeMessage {
  type: "gaze";
  t_ms: number;
  x: number;
  y: number;
}

export type ClientMessage =
  | GazeMessage
  | { type: "calibrate_start"; samples?: number }
  | { type: "start_phrase"; text: string };
