// Connection legality: the one rule that keeps canvas programs
// type-correct is that an output plugs into a port of the same type.

import type { Registry } from "./model.js";

export type DropTarget =
  | { kind: "socket"; uid: string; port: string; type: string; occupied: boolean }
  | { kind: "slot"; uid: string; slot: string }
  | { kind: "after"; uid: string }
  | { kind: "canvas"; x: number; y: number };

export function canDrop(
  registry: Registry,
  kindId: string,
  target: DropTarget,
): boolean {
  const output = registry.kind(kindId).value_output;
  switch (target.kind) {
    case "socket":
      return output !== null && output === target.type && !target.occupied;
    case "slot":
    case "after":
      return output === null;
    case "canvas":
      return true; // anything may lie loose; value roots render greyed
  }
}
