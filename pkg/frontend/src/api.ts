// Thin typed client for the nutrition server's JSON interface.  Every call
// goes through request(), which records the raw exchange in `traffic` so the
// test suite can compare rendered values against the bytes that actually
// arrived.

export interface Profile {
  userId: string;
  name: string;
  gender: string;
  age: number;
  heightCm: number;
  weightKg: number;
  activity: string;
  email: string;
}

export interface Product {
  gtin: string;
  name: string;
  energyPer100g: number;
  proteinPer100g: number;
  fatPer100g: number;
  carbPer100g: number;
}

export interface ExerciseRow {
  name: string;
  minutes: number;
}

export interface Verdict {
  standardKcal: number;
  requiredKcal: number;
  consumedKcal: number;
  candidateKcal: number;
  balanceKcal: number;
  excessKcal: number;
  status: string;
  suggestions: ExerciseRow[];
}

export interface ConsumeReceipt {
  entryId: string;
  energyKcal: number;
  warning?: string;
}

export interface ProfileFields {
  name: string;
  gender: string;
  age: string;
  heightCm: string;
  weightKg: string;
  activity: string;
  email: string;
}

export interface CheckFields {
  userId: string;
  date: string;
  meal: string;
  barcode: string;
  quantityG: string;
}

export interface TrafficRecord {
  method: string;
  path: string;
  status: number;
  body: string;
}

/** Server rejected the request with a structured fault code. */
export class ApiFault extends Error {
  code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
  }
}

/** The server could not be reached at all. */
export class NetworkError extends Error {}

let apiBase = '';

export function setApiBase(url: string): void {
  apiBase = url.replace(/\/+$/, '');
}

/** Raw request/response log, most recent last.  Inspection only. */
export const traffic: TrafficRecord[] = [];

async function request<T>(method: string, path: string, body?: BodyInit, contentType?: string): Promise<T> {
  const headers: Record<string, string> = {};
  if (contentType) headers['Content-Type'] = contentType;
  let res: Response;
  try {
    res = await fetch(apiBase + path, { method, headers, body });
  } catch {
    throw new NetworkError(`could not reach ${apiBase + path}`);
  }
  const text = await res.text();
  traffic.push({ method, path, status: res.status, body: text });
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch {
    throw new NetworkError(`unreadable reply from ${path}`);
  }
  if (!res.ok) {
    const fault = (parsed as { error?: { code?: string; message?: string } }).error;
    throw new ApiFault(fault?.code ?? 'InternalError', fault?.message ?? text);
  }
  return parsed as T;
}

const postJson = <T>(path: string, payload: unknown): Promise<T> =>
  request<T>('POST', path, JSON.stringify(payload), 'application/json');

export const api = {
  profiles: (): Promise<{ profiles: Profile[] }> => request('GET', '/api/users'),

  createProfile: (fields: ProfileFields): Promise<{ userId: string }> => postJson('/api/users', fields),

  updateProfile: (userId: string, fields: ProfileFields): Promise<{ userId: string }> =>
    request('PUT', `/api/users/${encodeURIComponent(userId)}`, JSON.stringify(fields), 'application/json'),

  product: (barcode: string): Promise<{ product: Product }> =>
    request('GET', `/api/products/${encodeURIComponent(barcode)}`),

  decode: (image: ArrayBuffer): Promise<{ gtin: string }> =>
    request('POST', '/api/decode', image, 'application/octet-stream'),

  check: (fields: CheckFields): Promise<Verdict> => postJson('/api/check', fields),

  consume: (fields: CheckFields): Promise<ConsumeReceipt> => postJson('/api/consume', fields),
};
