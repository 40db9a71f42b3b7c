// Newline-delimited JSON over a byte stream, one callback per object.

export async function readNdjson<T>(
  stream: ReadableStream<Uint8Array>,
  onItem: (item: T) => void,
): Promise<void> {
  const reader = stream.getReader();
  const decoder = new TextDecoder();
  let buffer = "";
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    buffer += decoder.decode(value, { stream: true });
    let newline;
    while ((newline = buffer.indexOf("\n")) >= 0) {
      const line = buffer.slice(0, newline).trim();
      buffer = buffer.slice(newline + 1);
      if (line) onItem(JSON.parse(line) as T);
    }
  }
  const rest = buffer.trim();
  if (rest) onItem(JSON.parse(rest) as T);
}
