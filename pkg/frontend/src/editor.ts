// Palette and canvas: blocks render as nested boxes, statements stack
// vertically, value blocks plug into typed sockets. Drops are gated by
// the type rules in typing.ts; an illegal drop flashes the target and
// leaves the program untouched. Top-level value blocks render greyed
// out: they are saved with the workspace but never executed.

import { Registry, Workspace } from "./model.js";
import { canDrop, DropTarget } from "./typing.js";
import type { KindSchema } from "./types.js";

interface DragState {
  newKind?: string;
  uid?: string;
  ghost: HTMLElement;
}

const GROUP_LABELS: Record<string, string> = {
  population: "Population",
  individuals: "Individuals",
  fitness: "Fitness measure",
  primitives: "Primitive datatypes",
  logic: "Logic",
  loops: "Loops",
  functions: "Functions",
  logging: "Logging",
  multithreading: "Multi-Threading",
  time: "Time management",
};

function labelOf(kind: KindSchema): string {
  return kind.id.replace(/_/g, " ");
}

export class Editor {
  workspace: Workspace;
  readonly positions = new Map<string, { x: number; y: number }>();
  private drag: DragState | null = null;
  private dropAt = 24;

  constructor(
    private readonly palette: HTMLElement,
    private readonly canvas: HTMLElement,
    readonly registry: Registry,
    private readonly onChange: () => void = () => {},
  ) {
    this.workspace = new Workspace(registry);
    this.renderPalette();
    this.renderCanvas();
    this.bindPointerHandlers();
  }

  // ---- drops (pure model operations, unit-testable) ----------------

  /** Create a palette block at the target; false = rejected. */
  dropNew(kindId: string, target: DropTarget): boolean {
    if (!canDrop(this.registry, kindId, target)) return false;
    const node = this.workspace.addBlock(kindId);
    this.placeAt(node.uid, target);
    this.renderCanvas();
    this.onChange();
    return true;
  }

  /** Re-home an existing block (with its subtree); false = rejected. */
  dropExisting(uid: string, target: DropTarget): boolean {
    if (!canDrop(this.registry, this.workspace.block(uid).kind, target)) {
      return false;
    }
    const targetUid =
      target.kind === "socket" || target.kind === "slot" || target.kind === "after"
        ? target.uid
        : null;
    if (targetUid !== null && this.inSubtree(uid, targetUid)) return false;
    this.workspace.detach(uid);
    this.placeAt(uid, target);
    this.renderCanvas();
    this.onChange();
    return true;
  }

  deleteBlock(uid: string): void {
    this.workspace.removeSubtree(uid);
    this.positions.delete(uid);
    this.renderCanvas();
    this.onChange();
  }

  private placeAt(uid: string, target: DropTarget): void {
    switch (target.kind) {
      case "socket":
        this.workspace.connectValue(target.uid, target.port, uid);
        break;
      case "slot":
        this.workspace.appendToSlot(target.uid, target.slot, uid);
        break;
      case "after":
        this.workspace.appendAfter(target.uid, uid);
        break;
      case "canvas":
        this.workspace.detach(uid);
        this.positions.set(uid, { x: target.x, y: target.y });
        break;
    }
  }

  private inSubtree(rootUid: string, candidate: string): boolean {
    if (rootUid === candidate) return true;
    const node = this.workspace.block(rootUid);
    const children = [
      ...Object.values(node.inputs),
      ...Object.values(node.bodies),
      ...(node.next ? [node.next] : []),
    ];
    return children.some((child) => this.inSubtree(child, candidate));
  }

  // ---- workspace swap ----------------------------------------------

  loadWorkspace(workspace: Workspace): void {
    this.workspace = workspace;
    this.positions.clear();
    let y = 24;
    for (const root of workspace.roots()) {
      this.positions.set(root, { x: 24, y });
      y += 56;
    }
    this.renderCanvas();
    this.onChange();
  }

  clear(): void {
    this.workspace.clear();
    this.positions.clear();
    this.renderCanvas();
    this.onChange();
  }

  // ---- rendering -----------------------------------------------------

  renderPalette(): void {
    this.palette.innerHTML = "";
    for (const group of this.registry.groups) {
      const section = document.createElement("section");
      section.className = "palette-group";
      const header = document.createElement("h3");
      header.textContent = GROUP_LABELS[group.name] ?? group.name;
      header.style.color = group.color;
      section.appendChild(header);
      for (const kind of this.registry.byId.values()) {
        if (kind.group !== group.name) continue;
        const item = document.createElement("div");
        item.className = "palette-item";
        item.dataset.kind = kind.id;
        item.textContent = labelOf(kind);
        item.style.borderLeft = `10px solid ${group.color}`;
        section.appendChild(item);
      }
      this.palette.appendChild(section);
    }
  }

  renderCanvas(): void {
    this.canvas.innerHTML = "";
    let fallbackY = 24;
    for (const rootUid of this.workspace.roots()) {
      const position = this.positions.get(rootUid) ?? { x: 24, y: fallbackY };
      this.positions.set(rootUid, position);
      fallbackY = position.y + 56;
      const holder = document.createElement("div");
      holder.className = "root-holder";
      holder.style.left = `${position.x}px`;
      holder.style.top = `${position.y}px`;
      const rootKind = this.registry.kind(this.workspace.block(rootUid).kind);
      if (rootKind.value_output !== null) holder.classList.add("greyed");
      holder.appendChild(this.renderChain(rootUid));
      this.canvas.appendChild(holder);
    }
  }

  private renderChain(headUid: string): HTMLElement {
    const column = document.createElement("div");
    column.className = "chain";
    let uid: string | null = headUid;
    while (uid) {
      const node = this.workspace.block(uid);
      column.appendChild(this.renderBlock(uid));
      uid = node.next;
    }
    return column;
  }

  private renderBlock(uid: string): HTMLElement {
    const node = this.workspace.block(uid);
    const kind = this.registry.kind(node.kind);
    const el = document.createElement("div");
    el.className = "block";
    el.dataset.uid = uid;
    el.style.background = this.registry.color(kind.group);

    const header = document.createElement("div");
    header.className = "block-header";
    header.dataset.dragUid = uid;
    const title = document.createElement("span");
    title.className = "block-title";
    title.textContent = labelOf(kind);
    header.appendChild(title);

    for (const field of kind.fields) {
      header.appendChild(this.renderField(uid, field, node.fields[field.name]));
    }
    for (const port of kind.input_ports) {
      header.appendChild(this.renderSocket(uid, port.name, port.type));
    }
    el.appendChild(header);

    for (const slot of kind.statement_slots) {
      const slotEl = document.createElement("div");
      slotEl.className = "slot";
      slotEl.dataset.slotOf = uid;
      slotEl.dataset.slot = slot;
      const label = document.createElement("span");
      label.className = "slot-label";
      label.textContent = slot;
      slotEl.appendChild(label);
      const head = node.bodies[slot];
      if (head) slotEl.appendChild(this.renderChain(head));
      el.appendChild(slotEl);
    }
    return el;
  }

  private renderField(uid: string, field: KindSchema["fields"][0], value: string) {
    const wrap = document.createElement("label");
    wrap.className = "field";
    wrap.textContent = field.name;
    let input: HTMLInputElement | HTMLSelectElement;
    if (field.kind === "enum") {
      input = document.createElement("select");
      for (const choice of field.choices) {
        const option = document.createElement("option");
        option.value = choice;
        option.textContent = choice;
        option.selected = choice === value;
        input.appendChild(option);
      }
    } else {
      input = document.createElement("input");
      input.type = field.kind === "number" ? "number" : "text";
      if (field.kind === "number") input.step = "any";
      input.value = value;
    }
    input.dataset.fieldOf = uid;
    input.dataset.field = field.name;
    input.addEventListener("pointerdown", (e) => e.stopPropagation());
    input.addEventListener("change", () => {
      try {
        this.workspace.setField(uid, field.name, input.value);
        this.onChange();
      } catch {
        input.classList.add("field-bad");
        setTimeout(() => input.classList.remove("field-bad"), 600);
        input.value = this.workspace.block(uid).fields[field.name];
      }
    });
    wrap.appendChild(input);
    return wrap;
  }

  private renderSocket(uid: string, port: string, type: string): HTMLElement {
    const socket = document.createElement("span");
    socket.className = "socket";
    socket.dataset.socketOf = uid;
    socket.dataset.port = port;
    socket.dataset.type = type;
    const child = this.workspace.block(uid).inputs[port];
    if (child) {
      socket.classList.add("socket-filled");
      socket.appendChild(this.renderBlock(child));
    } else {
      socket.classList.add("socket-empty");
      socket.textContent = `${port}: ${type}`;
    }
    return socket;
  }

  // ---- pointer plumbing ----------------------------------------------

  private bindPointerHandlers(): void {
    this.palette.addEventListener("pointerdown", (event) => {
      const item = (event.target as HTMLElement).closest<HTMLElement>(
        ".palette-item",
      );
      if (!item?.dataset.kind) return;
      event.preventDefault();
      this.beginDrag({ newKind: item.dataset.kind }, event);
    });
    this.canvas.addEventListener("pointerdown", (event) => {
      const header = (event.target as HTMLElement).closest<HTMLElement>(
        "[data-drag-uid]",
      );
      if (!header?.dataset.dragUid) return;
      event.preventDefault();
      this.beginDrag({ uid: header.dataset.dragUid }, event);
    });
  }

  private beginDrag(
    start: { newKind?: string; uid?: string },
    event: PointerEvent,
  ): void {
    const ghost = document.createElement("div");
    ghost.className = "drag-ghost";
    ghost.textContent = start.newKind
      ? labelOf(this.registry.kind(start.newKind))
      : labelOf(this.registry.kind(this.workspace.block(start.uid!).kind));
    document.body.appendChild(ghost);
    this.drag = { ...start, ghost };
    this.moveGhost(event);

    const onMove = (e: PointerEvent) => {
      this.moveGhost(e);
      this.highlightTarget(e);
    };
    const onUp = (e: PointerEvent) => {
      document.removeEventListener("pointermove", onMove);
      document.removeEventListener("pointerup", onUp);
      this.finishDrag(e);
    };
    document.addEventListener("pointermove", onMove);
    document.addEventListener("pointerup", onUp);
  }

  private moveGhost(event: PointerEvent): void {
    if (!this.drag) return;
    this.drag.ghost.style.left = `${event.clientX + 8}px`;
    this.drag.ghost.style.top = `${event.clientY + 8}px`;
  }

  private kindBeingDragged(): string | null {
    if (!this.drag) return null;
    return this.drag.newKind ?? this.workspace.block(this.drag.uid!).kind;
  }

  private targetUnder(event: PointerEvent): DropTarget | null {
    const el = document.elementFromPoint(event.clientX, event.clientY);
    if (!el) return null;
    const socket = (el as HTMLElement).closest<HTMLElement>("[data-socket-of]");
    if (socket) {
      return {
        kind: "socket",
        uid: socket.dataset.socketOf!,
        port: socket.dataset.port!,
        type: socket.dataset.type!,
        occupied: socket.classList.contains("socket-filled"),
      };
    }
    const slot = (el as HTMLElement).closest<HTMLElement>("[data-slot-of]");
    if (slot) {
      return { kind: "slot", uid: slot.dataset.slotOf!, slot: slot.dataset.slot! };
    }
    const block = (el as HTMLElement).closest<HTMLElement>("[data-uid]");
    if (block && this.registry.isStatement(this.workspace.block(block.dataset.uid!).kind)) {
      return { kind: "after", uid: block.dataset.uid! };
    }
    if (this.canvas.contains(el)) {
      const rect = this.canvas.getBoundingClientRect();
      return {
        kind: "canvas",
        x: event.clientX - rect.left,
        y: event.clientY - rect.top,
      };
    }
    return null;
  }

  private highlightTarget(event: PointerEvent): void {
    for (const el of this.canvas.querySelectorAll(".drop-ok, .drop-bad")) {
      el.classList.remove("drop-ok", "drop-bad");
    }
    const kindId = this.kindBeingDragged();
    if (!kindId) return;
    const target = this.targetUnder(event);
    if (!target || target.kind === "canvas") return;
    const legal = canDrop(this.registry, kindId, target);
    const el = document.elementFromPoint(event.clientX, event.clientY);
    const marker = (el as HTMLElement)?.closest<HTMLElement>(
      "[data-socket-of], [data-slot-of], [data-uid]",
    );
    marker?.classList.add(legal ? "drop-ok" : "drop-bad");
  }

  private finishDrag(event: PointerEvent): void {
    const drag = this.drag;
    this.drag = null;
    if (!drag) return;
    drag.ghost.remove();

    // dropping back over the palette deletes (trash behavior)
    const under = document.elementFromPoint(event.clientX, event.clientY);
    if (under && this.palette.contains(under)) {
      if (drag.uid) this.deleteBlock(drag.uid);
      return;
    }

    const target = this.targetUnder(event);
    if (!target) return;
    const accepted = drag.newKind
      ? this.dropNew(drag.newKind, target)
      : this.dropExisting(drag.uid!, target);
    if (!accepted) this.flashRejected(event);
  }

  private flashRejected(event: PointerEvent): void {
    const el = document.elementFromPoint(event.clientX, event.clientY);
    const marker = (el as HTMLElement)?.closest<HTMLElement>(
      "[data-socket-of], [data-slot-of], [data-uid]",
    );
    if (!marker) return;
    marker.classList.add("drop-rejected");
    setTimeout(() => marker.classList.remove("drop-rejected"), 400);
  }

  nextDropPosition(): { x: number; y: number } {
    this.dropAt += 32;
    return { x: 24, y: this.dropAt };
  }
}
