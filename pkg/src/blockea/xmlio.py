"""Bit-exact XML (de)serialization of block programs.

The `.blockea.xml` document is a flat list of blocks under a versioned
root; connections are by uid reference, which is what makes dangling
references and cycles expressible (and detectable) at parse time:

    <blockea format_version="1">
      <block kind="print" uid="b1">
        <value name="value" ref="b2"/>
        <next ref="b3"/>
      </block>
      <block kind="text_literal" uid="b2">
        <field name="value">hi</field>
      </block>
      ...
    </blockea>

Roots are the blocks no other block references, in document order.
Serialization is canonical: blocks are renumbered and emitted depth-first
from the roots (input ports first, then body slots, then the next chain),
all fields are written explicitly, and two structurally equal programs
always produce identical text.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .blocks import (
    BadField,
    Block,
    BlockProgram,
    assemble_program,
    kind_of,
)
from .values import format_number

FORMAT_VERSION = 1


class XmlError(ValueError):
    pass


class MalformedXml(XmlError):
    pass


class UnsupportedVersion(XmlError):
    pass


def _escape_text(s: str) -> str:
    s = s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return s.replace("\r", "&#13;")


def _escape_attr(s: str) -> str:
    return (
        s.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
        .replace("\n", "&#10;")
        .replace("\r", "&#13;")
        .replace("\t", "&#9;")
    )


def serialize_xml(program: BlockProgram) -> str:
    order = list(program.walk())
    canonical = {block.uid: f"b{i + 1}" for i, block in enumerate(order)}

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if not order:
        lines.append(f'<blockea format_version="{FORMAT_VERSION}"/>')
        return "\n".join(lines) + "\n"
    lines.append(f'<blockea format_version="{FORMAT_VERSION}">')
    for block in order:
        kind = kind_of(block.kind)
        lines.append(f'  <block kind="{block.kind}" uid="{canonical[block.uid]}">')
        for spec in kind.fields:
            value = block.field_values[spec.name]
            text = format_number(value) if spec.kind == "number" else str(value)
            if text:
                lines.append(
                    f'    <field name="{spec.name}">{_escape_text(text)}</field>'
                )
            else:
                lines.append(f'    <field name="{spec.name}"/>')
        for port in kind.input_ports:
            child = block.input_connections.get(port.name)
            if child is not None:
                lines.append(
                    f'    <value name="{port.name}" ref="{canonical[child]}"/>'
                )
        for slot in kind.statement_slots:
            head = block.body_heads.get(slot)
            if head is not None:
                lines.append(
                    f'    <statements name="{slot}" ref="{canonical[head]}"/>'
                )
        if block.next is not None:
            lines.append(f'    <next ref="{canonical[block.next]}"/>')
        lines.append("  </block>")
    lines.append("</blockea>")
    return "\n".join(lines) + "\n"


def _require_attrs(elem: ET.Element, required: tuple[str, ...]) -> None:
    have = set(elem.attrib)
    missing = set(required) - have
    unknown = have - set(required)
    if missing:
        raise MalformedXml(f"<{elem.tag}> missing attributes {sorted(missing)}")
    if unknown:
        raise MalformedXml(f"<{elem.tag}> has unknown attributes {sorted(unknown)}")


def _parse_block(elem: ET.Element) -> Block:
    _require_attrs(elem, ("kind", "uid"))
    kind_id = elem.attrib["kind"]
    uid = elem.attrib["uid"]
    kind = kind_of(kind_id)

    fields: dict[str, float | str] = {}
    inputs: dict[str, str] = {}
    heads: dict[str, str] = {}
    next_uid: str | None = None

    for child in elem:
        if child.tag == "field":
            _require_attrs(child, ("name",))
            if len(child) != 0:
                raise MalformedXml("<field> cannot hold child elements")
            name = child.attrib["name"]
            spec = kind.field_spec(name)
            if spec is None:
                raise BadField(f"{kind_id}: no field named {name!r}")
            if name in fields:
                raise BadField(f"{kind_id}: duplicate field {name!r}")
            text = child.text or ""
            if spec.kind == "number":
                try:
                    fields[name] = float(text)
                except ValueError:
                    raise BadField(
                        f"{kind_id}.{name}: not a number: {text!r}"
                    ) from None
            else:
                fields[name] = text
        elif child.tag == "value":
            _require_attrs(child, ("name", "ref"))
            name = child.attrib["name"]
            if kind.port(name) is None:
                raise BadField(f"{kind_id}: no input port named {name!r}")
            if name in inputs:
                raise BadField(f"{kind_id}: duplicate connection on port {name!r}")
            inputs[name] = child.attrib["ref"]
        elif child.tag == "statements":
            _require_attrs(child, ("name", "ref"))
            name = child.attrib["name"]
            if name not in kind.statement_slots:
                raise BadField(f"{kind_id}: no statement slot named {name!r}")
            if name in heads:
                raise BadField(f"{kind_id}: duplicate slot {name!r}")
            heads[name] = child.attrib["ref"]
        elif child.tag == "next":
            _require_attrs(child, ("ref",))
            if next_uid is not None:
                raise BadField(f"{kind_id}: duplicate <next>")
            next_uid = child.attrib["ref"]
        else:
            raise MalformedXml(f"unexpected element <{child.tag}> inside <block>")

    return Block(
        uid=uid,
        kind=kind_id,
        field_values=fields,
        input_connections=inputs,
        body_heads=heads,
        next=next_uid,
    )


def parse_xml(text: str) -> BlockProgram:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        raise MalformedXml(f"not well-formed XML: {e}") from None

    if root.tag != "blockea":
        raise MalformedXml(f"root element must be <blockea>, got <{root.tag}>")
    _require_attrs(root, ("format_version",))
    version = root.attrib["format_version"]
    try:
        major = int(version.split(".")[0])
    except ValueError:
        raise MalformedXml(f"bad format_version {version!r}") from None
    if major > FORMAT_VERSION:
        raise UnsupportedVersion(
            f"format_version {version} is newer than supported ({FORMAT_VERSION})"
        )

    blocks = []
    for child in root:
        if child.tag != "block":
            raise MalformedXml(f"unexpected element <{child.tag}> at top level")
        blocks.append(_parse_block(child))
    return assemble_program(blocks)
