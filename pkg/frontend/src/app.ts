// Wires the editor, service client, console, and charts into the page.

import { ServiceClient, ServiceError } from "./api.js";
import { ChartPane } from "./charts.js";
import { ConsolePane } from "./console.js";
import { Editor } from "./editor.js";
import { parseXml, Registry } from "./model.js";
import type { RunEvent } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function download(filename: string, text: string, type = "text/plain"): void {
  const url = URL.createObjectURL(new Blob([text], { type }));
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}

export async function startApp(baseUrl = ""): Promise<void> {
  const client = new ServiceClient(baseUrl);
  const registry = new Registry(await client.registry());

  const consolePane = new ConsolePane(el("console-lines"), el("run-state"));
  const charts = new ChartPane(
    el("chart") as unknown as SVGSVGElement,
    el("chart-legend"),
  );
  const editor = new Editor(el("palette"), el("canvas"), registry);

  let activeRun: string | null = null;
  let finishedRun: string | null = null;
  let programStem = "program";

  const seedInput = el<HTMLInputElement>("seed");
  const modeSelect = el<HTMLSelectElement>("mode");
  const workersInput = el<HTMLInputElement>("workers");

  const modeString = () =>
    modeSelect.value === "pool"
      ? `pool:${Math.max(1, Number(workersInput.value) || 1)}`
      : modeSelect.value;

  modeSelect.addEventListener("change", () => {
    workersInput.style.display = modeSelect.value === "pool" ? "" : "none";
  });

  // examples dropdown
  const examplesSelect = el<HTMLSelectElement>("examples");
  for (const example of await client.examples()) {
    const option = document.createElement("option");
    option.value = example.name;
    option.textContent = example.title;
    examplesSelect.appendChild(option);
  }
  examplesSelect.addEventListener("change", async () => {
    if (!examplesSelect.value) return;
    const xml = await client.exampleXml(examplesSelect.value);
    editor.loadWorkspace(parseXml(registry, xml));
    programStem = examplesSelect.value;
    consolePane.note(`loaded example ${examplesSelect.value}`);
    examplesSelect.value = "";
  });

  el("new").addEventListener("click", () => {
    editor.clear();
    consolePane.clear();
    charts.clear();
  });

  el("save").addEventListener("click", () => {
    download(`${programStem}.blockea.xml`, editor.workspace.serializeXml(),
             "application/xml");
  });

  const fileInput = el<HTMLInputElement>("load-file");
  el("load").addEventListener("click", () => fileInput.click());
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    fileInput.value = "";
    if (!file) return;
    const text = await file.text();
    try {
      // parse first: a bad file must not destroy the current canvas
      const loaded = parseXml(registry, text);
      editor.loadWorkspace(loaded);
      programStem = file.name.replace(/\.blockea\.xml$|\.xml$/, "");
      consolePane.note(`loaded ${file.name}`);
    } catch (err) {
      consolePane.error(`cannot load ${file.name}: ${(err as Error).message}`);
    }
  });

  el("validate").addEventListener("click", async () => {
    const result = await client.validate(editor.workspace.serializeXml());
    if (result.diagnostics.length === 0) {
      consolePane.note("validation: no diagnostics");
      return;
    }
    for (const diag of result.diagnostics) {
      const line = `${diag.severity}: ${diag.code} at ${diag.block}: ${diag.message}`;
      if (diag.severity === "error") consolePane.error(line);
      else consolePane.note(line);
    }
  });

  const onEvent = (event: RunEvent): void => {
    switch (event.type) {
      case "print":
        consolePane.print(event.text);
        break;
      case "plot":
        charts.addPoint(event.series, event.x, event.y, event.style);
        break;
      case "run_started":
        consolePane.note(`— run ${event.run} started`);
        break;
      case "run_finished":
        consolePane.note(
          `— run ${event.run} finished: best ${event.best_individual ?? "-"} ` +
          `(fitness ${event.best_fitness})`,
        );
        break;
      case "record":
        break; // records feed the exports, not the live view
      case "end":
        consolePane.setState(event.state, event.error ?? "");
        if (event.state === "finished") finishedRun = activeRun;
        activeRun = null;
        break;
    }
  };

  el("run").addEventListener("click", async () => {
    if (activeRun) {
      consolePane.error("a run is already active");
      return;
    }
    const xml = editor.workspace.serializeXml();
    const check = await client.validate(xml);
    if (!check.valid) {
      for (const diag of check.diagnostics) {
        if (diag.severity === "error") {
          consolePane.error(`${diag.code} at ${diag.block}: ${diag.message}`);
        }
      }
      return;
    }
    consolePane.clear();
    charts.clear();
    finishedRun = null;
    try {
      activeRun = await client.submitRun(xml, Number(seedInput.value) || 0,
                                         modeString());
      consolePane.setState("running", `run ${activeRun}`);
      await client.streamEvents(activeRun, onEvent);
    } catch (err) {
      consolePane.setState("failed", (err as Error).message);
      activeRun = null;
    }
  });

  el("cancel").addEventListener("click", async () => {
    if (activeRun) await client.cancel(activeRun);
  });

  el("dl-csv").addEventListener("click", async () => {
    if (!finishedRun) return consolePane.error("no finished run to export");
    download(`${programStem}.csv`, await client.exportCsv(finishedRun),
             "text/csv");
  });

  el("dl-ioh").addEventListener("click", async () => {
    if (!finishedRun) return consolePane.error("no finished run to export");
    const ioh = await client.exportIoh(finishedRun);
    download(ioh.info_name, ioh.info);
    download(ioh.dat_name, ioh.dat);
  });

  el("dl-code").addEventListener("click", async () => {
    try {
      const bundle = await client.exportCode(
        editor.workspace.serializeXml(), Number(seedInput.value) || 0,
      );
      for (const [name, text] of Object.entries(bundle)) {
        download(name, text, "text/x-python");
      }
    } catch (err) {
      consolePane.error((err as ServiceError).message);
    }
  });

  consolePane.setState("idle");
}
