// Shared shapes for the engine's registry schema, diagnostics, and the
// run event stream (see the engine's docs/formats.md).

export type ValueTypeName =
  | "Number"
  | "Boolean"
  | "Text"
  | "Individual"
  | "Population"
  | "ListOfNumber";

export interface FieldSchema {
  name: string;
  kind: "number" | "string" | "enum";
  default: number | string;
  choices: string[];
}

export interface PortSchema {
  name: string;
  type: ValueTypeName;
}

export interface KindSchema {
  id: string;
  group: string;
  value_output: ValueTypeName | null;
  input_ports: PortSchema[];
  statement_slots: string[];
  fields: FieldSchema[];
}

export interface GroupSchema {
  name: string;
  color: string;
}

export interface RegistrySchema {
  groups: GroupSchema[];
  kinds: KindSchema[];
}

export interface Diagnostic {
  severity: "warning" | "error";
  code: string;
  block: string;
  detail: string;
  message: string;
}

export type RunEvent =
  | { type: "print"; run: number; text: string }
  | {
      type: "plot";
      run: number;
      series: string;
      x: number;
      y: number;
      style: "scatter" | "line" | "bar";
    }
  | {
      type: "record";
      run: number;
      generation: number;
      evaluations: number;
      best_fitness: number;
    }
  | { type: "run_started"; run: number }
  | {
      type: "run_finished";
      run: number;
      best_individual: string | null;
      best_fitness: number;
    }
  | { type: "end"; state: "finished" | "failed" | "cancelled"; error?: string };

export type RunState =
  | "idle"
  | "queued"
  | "running"
  | "finished"
  | "failed"
  | "cancelled";
