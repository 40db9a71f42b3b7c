// Client-side mirror of the engine's block programs and its canonical
// `.blockea.xml` serialization. Whatever this module serializes must be
// byte-identical to the engine's own canonical output; the round-trip
// test against the shipped example file enforces that.

import type { KindSchema, RegistrySchema } from "./types.js";

export const FORMAT_VERSION = 1;

export interface BlockNode {
  uid: string;
  kind: string;
  fields: Record<string, string>; // canonical field text (numbers included)
  inputs: Record<string, string>; // port name -> child uid
  bodies: Record<string, string>; // slot name -> head uid
  next: string | null;
}

export class ParseFailure extends Error {}

export class Registry {
  readonly byId = new Map<string, KindSchema>();
  readonly groups: RegistrySchema["groups"];

  constructor(schema: RegistrySchema) {
    this.groups = schema.groups;
    for (const kind of schema.kinds) this.byId.set(kind.id, kind);
  }

  kind(id: string): KindSchema {
    const kind = this.byId.get(id);
    if (!kind) throw new ParseFailure(`unknown block kind '${id}'`);
    return kind;
  }

  isStatement(id: string): boolean {
    return this.kind(id).value_output === null;
  }

  color(group: string): string {
    return this.groups.find((g) => g.name === group)?.color ?? "#666";
  }
}

// Mirror of the engine's number rendering: integers without a decimal
// point below 2^53, positional notation for exponents in [-4, 16), and
// two-digit scientific exponents elsewhere.
export function formatNumber(v: number): string {
  if (Number.isNaN(v)) return "NaN";
  if (v === Infinity) return "Infinity";
  if (v === -Infinity) return "-Infinity";
  if (Number.isInteger(v) && Math.abs(v) < 2 ** 53) return String(v);

  const sign = v < 0 ? "-" : "";
  const [mantissa, expText] = Math.abs(v).toExponential().split("e");
  const digits = mantissa.replace(".", "");
  const exp = parseInt(expText, 10);

  if (exp < -4 || exp >= 16) {
    const head =
      digits.length > 1 ? `${digits[0]}.${digits.slice(1)}` : digits[0];
    const expSign = exp < 0 ? "-" : "+";
    const expDigits = String(Math.abs(exp)).padStart(2, "0");
    return `${sign}${head}e${expSign}${expDigits}`;
  }
  if (exp < 0) {
    return `${sign}0.${"0".repeat(-exp - 1)}${digits}`;
  }
  const whole = digits.slice(0, exp + 1).padEnd(exp + 1, "0");
  const frac = digits.slice(exp + 1);
  return `${sign}${whole}.${frac.length ? frac : "0"}`;
}

export function normalizeNumberText(text: string): string {
  const value = Number(text);
  if (!Number.isFinite(value) || text.trim() === "") {
    throw new ParseFailure(`not a finite number: '${text}'`);
  }
  return formatNumber(value);
}

function escapeText(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/\r/g, "&#13;");
}

export class Workspace {
  readonly blocks = new Map<string, BlockNode>();
  private order: string[] = []; // insertion order; roots follow it
  private counter = 0;

  constructor(readonly registry: Registry) {}

  freshUid(): string {
    this.counter += 1;
    return `u${this.counter}`;
  }

  addBlock(kindId: string, uid?: string): BlockNode {
    const kind = this.registry.kind(kindId);
    const id = uid ?? this.freshUid();
    if (this.blocks.has(id)) throw new ParseFailure(`duplicate uid '${id}'`);
    const fields: Record<string, string> = {};
    for (const field of kind.fields) {
      fields[field.name] =
        field.kind === "number"
          ? formatNumber(Number(field.default))
          : String(field.default);
    }
    const node: BlockNode = {
      uid: id,
      kind: kindId,
      fields,
      inputs: {},
      bodies: {},
      next: null,
    };
    this.blocks.set(id, node);
    this.order.push(id);
    return node;
  }

  block(uid: string): BlockNode {
    const node = this.blocks.get(uid);
    if (!node) throw new ParseFailure(`no block '${uid}'`);
    return node;
  }

  /** uid -> parent reference descriptor, rebuilt on demand. */
  private parents(): Map<string, { uid: string; via: string }> {
    const map = new Map<string, { uid: string; via: string }>();
    for (const node of this.blocks.values()) {
      for (const [port, child] of Object.entries(node.inputs)) {
        map.set(child, { uid: node.uid, via: `value:${port}` });
      }
      for (const [slot, head] of Object.entries(node.bodies)) {
        map.set(head, { uid: node.uid, via: `slot:${slot}` });
      }
      if (node.next) map.set(node.next, { uid: node.uid, via: "next" });
    }
    return map;
  }

  roots(): string[] {
    const referenced = this.parents();
    return this.order.filter((uid) => !referenced.has(uid));
  }

  /** Detach a block from whatever holds it; it becomes a root. */
  detach(uid: string): void {
    const parent = this.parents().get(uid);
    if (!parent) return;
    const holder = this.block(parent.uid);
    if (parent.via === "next") holder.next = null;
    else if (parent.via.startsWith("value:")) {
      delete holder.inputs[parent.via.slice(6)];
    } else {
      delete holder.bodies[parent.via.slice(5)];
    }
  }

  connectValue(parentUid: string, port: string, childUid: string): void {
    this.detach(childUid);
    this.block(parentUid).inputs[port] = childUid;
  }

  /** Append a statement (chain head) at the end of a body slot. */
  appendToSlot(parentUid: string, slot: string, uid: string): void {
    this.detach(uid);
    const parent = this.block(parentUid);
    const head = parent.bodies[slot];
    if (!head) {
      parent.bodies[slot] = uid;
      return;
    }
    let tail = this.block(head);
    while (tail.next) tail = this.block(tail.next);
    tail.next = uid;
  }

  appendAfter(prevUid: string, uid: string): void {
    this.detach(uid);
    let tail = this.block(prevUid);
    while (tail.next) tail = this.block(tail.next);
    tail.next = uid;
  }

  removeSubtree(uid: string): void {
    this.detach(uid);
    const doomed: string[] = [];
    const visit = (id: string) => {
      const node = this.block(id);
      doomed.push(id);
      Object.values(node.inputs).forEach(visit);
      Object.values(node.bodies).forEach(visit);
      if (node.next) visit(node.next);
    };
    visit(uid);
    for (const id of doomed) this.blocks.delete(id);
    this.order = this.order.filter((id) => this.blocks.has(id));
  }

  clear(): void {
    this.blocks.clear();
    this.order = [];
  }

  setField(uid: string, name: string, rawText: string): void {
    const node = this.block(uid);
    const spec = this.registry.kind(node.kind).fields.find(
      (f) => f.name === name,
    );
    if (!spec) throw new ParseFailure(`${node.kind}: no field '${name}'`);
    node.fields[name] =
      spec.kind === "number" ? normalizeNumberText(rawText) : rawText;
  }

  // ---- canonical serialization ------------------------------------

  private walk(): BlockNode[] {
    const out: BlockNode[] = [];
    const chain = (head: string | null) => {
      let uid = head;
      while (uid) {
        const node = this.block(uid);
        one(node);
        uid = node.next;
      }
    };
    const one = (node: BlockNode) => {
      out.push(node);
      const kind = this.registry.kind(node.kind);
      for (const port of kind.input_ports) {
        const child = node.inputs[port.name];
        if (child) chain(child);
      }
      for (const slot of kind.statement_slots) {
        const head = node.bodies[slot];
        if (head) chain(head);
      }
    };
    for (const root of this.roots()) chain(root);
    return out;
  }

  serializeXml(): string {
    const order = this.walk();
    const lines = ['<?xml version="1.0" encoding="UTF-8"?>'];
    if (order.length === 0) {
      lines.push(`<blockea format_version="${FORMAT_VERSION}"/>`);
      return lines.join("\n") + "\n";
    }
    const canonical = new Map<string, string>();
    order.forEach((node, i) => canonical.set(node.uid, `b${i + 1}`));

    lines.push(`<blockea format_version="${FORMAT_VERSION}">`);
    for (const node of order) {
      const kind = this.registry.kind(node.kind);
      lines.push(`  <block kind="${node.kind}" uid="${canonical.get(node.uid)}">`);
      for (const field of kind.fields) {
        const text = node.fields[field.name] ?? "";
        if (text) {
          lines.push(
            `    <field name="${field.name}">${escapeText(text)}</field>`,
          );
        } else {
          lines.push(`    <field name="${field.name}"/>`);
        }
      }
      for (const port of kind.input_ports) {
        const child = node.inputs[port.name];
        if (child) {
          lines.push(
            `    <value name="${port.name}" ref="${canonical.get(child)}"/>`,
          );
        }
      }
      for (const slot of kind.statement_slots) {
        const head = node.bodies[slot];
        if (head) {
          lines.push(
            `    <statements name="${slot}" ref="${canonical.get(head)}"/>`,
          );
        }
      }
      if (node.next) {
        lines.push(`    <next ref="${canonical.get(node.next)}"/>`);
      }
      lines.push("  </block>");
    }
    lines.push("</blockea>");
    return lines.join("\n") + "\n";
  }
}

export function parseXml(registry: Registry, text: string): Workspace {
  const doc = new DOMParser().parseFromString(text, "application/xml");
  const error = doc.querySelector("parsererror");
  if (error) throw new ParseFailure(`not well-formed XML: ${error.textContent}`);
  const root = doc.documentElement;
  if (root.tagName !== "blockea") {
    throw new ParseFailure(`root element must be <blockea>, got <${root.tagName}>`);
  }
  const version = root.getAttribute("format_version") ?? "";
  if (parseInt(version.split(".")[0], 10) > FORMAT_VERSION) {
    throw new ParseFailure(`format_version ${version} is newer than supported`);
  }

  const workspace = new Workspace(registry);
  const pending: Array<() => void> = [];

  for (const el of Array.from(root.children)) {
    if (el.tagName !== "block") {
      throw new ParseFailure(`unexpected element <${el.tagName}> at top level`);
    }
    const kindId = el.getAttribute("kind") ?? "";
    const uid = el.getAttribute("uid") ?? "";
    if (!kindId || !uid) throw new ParseFailure("<block> needs kind and uid");
    const kind = registry.kind(kindId);
    const node = workspace.addBlock(kindId, uid);

    for (const child of Array.from(el.children)) {
      const name = child.getAttribute("name") ?? "";
      if (child.tagName === "field") {
        const spec = kind.fields.find((f) => f.name === name);
        if (!spec) throw new ParseFailure(`${kindId}: no field '${name}'`);
        const raw = child.textContent ?? "";
        node.fields[name] =
          spec.kind === "number" ? normalizeNumberText(raw) : raw;
        if (spec.kind === "enum" && !spec.choices.includes(node.fields[name])) {
          throw new ParseFailure(`${kindId}.${name}: bad choice '${raw}'`);
        }
      } else if (child.tagName === "value") {
        if (!kind.input_ports.some((p) => p.name === name)) {
          throw new ParseFailure(`${kindId}: no input port '${name}'`);
        }
        const ref = child.getAttribute("ref") ?? "";
        pending.push(() => {
          workspace.block(ref); // reference must exist
          node.inputs[name] = ref;
        });
      } else if (child.tagName === "statements") {
        if (!kind.statement_slots.includes(name)) {
          throw new ParseFailure(`${kindId}: no statement slot '${name}'`);
        }
        const ref = child.getAttribute("ref") ?? "";
        pending.push(() => {
          workspace.block(ref);
          node.bodies[name] = ref;
        });
      } else if (child.tagName === "next") {
        const ref = child.getAttribute("ref") ?? "";
        pending.push(() => {
          workspace.block(ref);
          node.next = ref;
        });
      } else {
        throw new ParseFailure(`unexpected element <${child.tagName}> in <block>`);
      }
    }
  }
  for (const connect of pending) connect();

  // reject cycles: every block must be reachable exactly once from a root
  const seen = new Set<string>();
  const chain = (head: string | null) => {
    let uid = head;
    while (uid) {
      if (seen.has(uid)) throw new ParseFailure(`block '${uid}' reached twice`);
      seen.add(uid);
      const node = workspace.block(uid);
      const kind = registry.kind(node.kind);
      for (const port of kind.input_ports) chain(node.inputs[port.name] ?? null);
      for (const slot of kind.statement_slots) chain(node.bodies[slot] ?? null);
      uid = node.next;
    }
  };
  for (const rootUid of workspace.roots()) chain(rootUid);
  if (seen.size !== workspace.blocks.size) {
    throw new ParseFailure("blocks unreachable from any root (cycle)");
  }
  return workspace;
}
