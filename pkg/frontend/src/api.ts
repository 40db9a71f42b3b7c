// The editor talks only to the engine's HTTP service.

import { readNdjson } from "./stream.js";
import type { Diagnostic, RegistrySchema, RunEvent } from "./types.js";

export interface ValidateResult {
  valid: boolean;
  diagnostics: Diagnostic[];
}

export interface ExampleInfo {
  name: string;
  title: string;
}

export interface IohExport {
  info_name: string;
  info: string;
  dat_name: string;
  dat: string;
}

export class ServiceError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function errorOf(response: Response): Promise<ServiceError> {
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body.error) message = body.error;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ServiceError(message, response.status);
}

export class ServiceClient {
  constructor(readonly baseUrl: string = "") {}

  private async ok(response: Response): Promise<Response> {
    if (!response.ok) throw await errorOf(response);
    return response;
  }

  async registry(): Promise<RegistrySchema> {
    return (await this.ok(await fetch(`${this.baseUrl}/registry`))).json();
  }

  async examples(): Promise<ExampleInfo[]> {
    return (await this.ok(await fetch(`${this.baseUrl}/examples`))).json();
  }

  async exampleXml(name: string): Promise<string> {
    return (
      await this.ok(await fetch(`${this.baseUrl}/examples/${name}`))
    ).text();
  }

  async validate(xml: string): Promise<ValidateResult> {
    const response = await fetch(`${this.baseUrl}/programs/validate`, {
      method: "POST",
      body: xml,
    });
    return (await this.ok(response)).json();
  }

  async submitRun(xml: string, seed: number, mode: string): Promise<string> {
    const query = `seed=${encodeURIComponent(seed)}&mode=${encodeURIComponent(mode)}`;
    const response = await fetch(`${this.baseUrl}/runs?${query}`, {
      method: "POST",
      body: xml,
    });
    return ((await (await this.ok(response)).json()) as { id: string }).id;
  }

  async streamEvents(
    runId: string,
    onEvent: (event: RunEvent) => void,
  ): Promise<void> {
    const response = await this.ok(
      await fetch(`${this.baseUrl}/runs/${runId}/events`),
    );
    if (!response.body) throw new ServiceError("no response body", 0);
    await readNdjson<RunEvent>(response.body, onEvent);
  }

  async cancel(runId: string): Promise<void> {
    await this.ok(
      await fetch(`${this.baseUrl}/runs/${runId}/cancel`, { method: "POST" }),
    );
  }

  async exportCsv(runId: string): Promise<string> {
    return (
      await this.ok(
        await fetch(`${this.baseUrl}/runs/${runId}/export?format=csv`),
      )
    ).text();
  }

  async exportIoh(runId: string): Promise<IohExport> {
    return (
      await this.ok(
        await fetch(`${this.baseUrl}/runs/${runId}/export?format=ioh`),
      )
    ).json();
  }

  async exportCode(xml: string, seed: number): Promise<Record<string, string>> {
    const response = await fetch(
      `${this.baseUrl}/programs/export-code?seed=${encodeURIComponent(seed)}`,
      { method: "POST", body: xml },
    );
    return (await this.ok(response)).json();
  }
}
