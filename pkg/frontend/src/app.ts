// Screen flow for the nutrition companion.  Every number shown in the UI is
// copied verbatim from a server reply; the client never computes, rounds, or
// validates nutrition values on its own.  Nothing is persisted in the
// browser: each visit starts from the welcome screen and asks the server.

import {
  api,
  ApiFault,
  NetworkError,
  setApiBase,
  type CheckFields,
  type ConsumeReceipt,
  type Product,
  type Profile,
  type Verdict,
} from './api.js';

export type ScreenName =
  | 'Welcome'
  | 'MainMenu'
  | 'ProfileForm'
  | 'BarcodeEntry'
  | 'ProductDetails'
  | 'QuantityCheck'
  | 'Verdict';

export interface InitOptions {
  apiBase?: string;
  welcomeDelayMs?: number;
}

interface Banner {
  message: string;
  retry: () => void;
}

interface State {
  screen: ScreenName;
  profiles: Profile[];
  editingId: string;
  formError: string;
  barcode: string;
  barcodeError: string;
  product: Product | null;
  memberId: string;
  quantityG: string;
  meal: string;
  date: string;
  checkError: string;
  checked: CheckFields | null;
  verdict: Verdict | null;
  receipt: ConsumeReceipt | null;
  consumeError: string;
  banner: Banner | null;
  busy: boolean;
}

const todayIso = (): string => new Date().toISOString().slice(0, 10);

const freshState = (): State => ({
  screen: 'Welcome',
  profiles: [],
  editingId: '',
  formError: '',
  barcode: '',
  barcodeError: '',
  product: null,
  memberId: '',
  quantityG: '',
  meal: 'lunch',
  date: todayIso(),
  checkError: '',
  checked: null,
  verdict: null,
  receipt: null,
  consumeError: '',
  banner: null,
  busy: false,
});

let state: State = freshState();
let rootEl: HTMLElement | null = null;

const esc = (s: string): string =>
  s.replace(/[&<>"']/g, (c) => ({ '&': '&amp;', '<': '&lt;', '>': '&gt;', '"': '&quot;', "'": '&#39;' })[c] ?? c);

const faultMessage = (err: unknown): string | null =>
  err instanceof ApiFault ? `${err.code}: ${err.message}` : null;

// Serialises requests: while one action is running, every other trigger is a
// no-op.  A network failure parks the action behind a retry banner.
async function guard(action: () => Promise<void>): Promise<void> {
  if (state.busy) return;
  state.busy = true;
  state.banner = null;
  try {
    await action();
  } catch (err) {
    if (err instanceof NetworkError) {
      state.banner = { message: err.message, retry: () => void guard(action) };
    } else {
      state.busy = false;
      throw err;
    }
  }
  state.busy = false;
  render();
}

const profileById = (userId: string): Profile | undefined => state.profiles.find((p) => p.userId === userId);

// ---------------------------------------------------------------- actions

const enterMainMenu = (): Promise<void> =>
  guard(async () => {
    const reply = await api.profiles();
    state.profiles = reply.profiles;
    state.screen = 'MainMenu';
  });

function openProfileForm(editingId: string): void {
  state.editingId = editingId;
  state.formError = '';
  state.screen = 'ProfileForm';
  render();
}

function openBarcodeEntry(): void {
  state.barcodeError = '';
  state.product = null;
  state.verdict = null;
  state.receipt = null;
  state.screen = 'BarcodeEntry';
  render();
}

const submitProfile = (fields: Record<string, string>): Promise<void> =>
  guard(async () => {
    const payload = {
      name: fields['name'] ?? '',
      gender: fields['gender'] ?? '',
      age: fields['age'] ?? '',
      heightCm: fields['heightCm'] ?? '',
      weightKg: fields['weightKg'] ?? '',
      activity: fields['activity'] ?? '',
      email: fields['email'] ?? '',
    };
    try {
      if (state.editingId) {
        await api.updateProfile(state.editingId, payload);
      } else {
        await api.createProfile(payload);
      }
    } catch (err) {
      const message = faultMessage(err);
      if (message) {
        state.formError = message;
        return;
      }
      throw err;
    }
    const reply = await api.profiles();
    state.profiles = reply.profiles;
    state.screen = 'MainMenu';
  });

const uploadImage = (file: File): Promise<void> =>
  guard(async () => {
    const bytes = await file.arrayBuffer();
    try {
      const reply = await api.decode(bytes);
      state.barcode = reply.gtin;
      state.barcodeError = '';
    } catch (err) {
      const message = faultMessage(err);
      if (message) {
        state.barcodeError = message;
        return;
      }
      throw err;
    }
  });

// The typed code goes to the server as-is: the catalog endpoint is the only
// authority on lengths and check digits, so there is no client-side filter.
const lookupProduct = (): Promise<void> =>
  guard(async () => {
    try {
      const reply = await api.product(state.barcode.trim());
      state.product = reply.product;
      state.memberId = state.profiles[0]?.userId ?? '';
      state.barcodeError = '';
      state.screen = 'ProductDetails';
    } catch (err) {
      const message = faultMessage(err);
      if (message) {
        state.barcodeError = message;
        return;
      }
      throw err;
    }
  });

function openQuantityCheck(): void {
  state.checkError = '';
  state.quantityG = '';
  state.screen = 'QuantityCheck';
  render();
}

const runCheck = (): Promise<void> =>
  guard(async () => {
    const product = state.product;
    if (!product) return;
    const fields: CheckFields = {
      userId: state.memberId,
      date: state.date,
      meal: state.meal,
      barcode: product.gtin,
      quantityG: state.quantityG,
    };
    try {
      state.verdict = await api.check(fields);
      state.checked = fields;
      state.receipt = null;
      state.consumeError = '';
      state.screen = 'Verdict';
    } catch (err) {
      const message = faultMessage(err);
      if (message) {
        state.checkError = message;
        return;
      }
      throw err;
    }
  });

const recordConsumption = (): Promise<void> =>
  guard(async () => {
    const fields = state.checked;
    if (!fields || state.receipt) return;
    try {
      state.receipt = await api.consume(fields);
    } catch (err) {
      const message = faultMessage(err);
      if (message) {
        state.consumeError = message;
        return;
      }
      throw err;
    }
  });

// --------------------------------------------------------------- rendering

const bannerHtml = (): string =>
  state.banner
    ? `<div class="banner" id="net-banner">
         <span>${esc(state.banner.message)}</span>
         <button id="retry-btn">Retry</button>
       </div>`
    : '';

const welcomeHtml = (): string => `
  <section data-screen="Welcome" id="welcome">
    <h1>healthwise</h1>
    <p>Scan what you are about to eat and see whether it fits the day.</p>
    <p class="hint">Tap anywhere to begin.</p>
  </section>`;

const mainMenuHtml = (): string => {
  const gated = state.profiles.length === 0;
  const disabled = gated ? ' disabled' : '';
  const roster = state.profiles
    .map((p) => `<li>${esc(p.name)} <span class="muted">(${esc(p.userId)})</span></li>`)
    .join('');
  return `
  <section data-screen="MainMenu">
    <h1>Main menu</h1>
    <nav class="menu">
      <button id="btn-capture"${disabled}>Capture barcode</button>
      <button id="btn-create">Create profile</button>
      <button id="btn-update"${disabled}>Update profile</button>
    </nav>
    ${gated ? '<p class="hint">Create a profile to unlock capture.</p>' : `<ul class="roster">${roster}</ul>`}
  </section>`;
};

const profileFormHtml = (): string => {
  const editing = state.editingId ? profileById(state.editingId) : undefined;
  const pick = state.editingId
    ? `<label>Member
         <select id="edit-select">
           ${state.profiles
             .map(
               (p) =>
                 `<option value="${esc(p.userId)}"${p.userId === state.editingId ? ' selected' : ''}>${esc(p.name)}</option>`,
             )
             .join('')}
         </select>
       </label>`
    : '';
  const genders = ['male', 'female'];
  const activities = ['low', 'medium', 'high'];
  const val = {
    name: editing?.name ?? '',
    gender: editing?.gender ?? 'male',
    age: editing ? String(editing.age) : '',
    heightCm: editing ? String(editing.heightCm) : '',
    weightKg: editing ? String(editing.weightKg) : '',
    activity: editing?.activity ?? 'medium',
    email: editing?.email ?? '',
  };
  return `
  <section data-screen="ProfileForm">
    <h1>${state.editingId ? 'Update profile' : 'Create profile'}</h1>
    ${pick}
    <form id="profile-form">
      <label>Name <input name="name" id="pf-name" value="${esc(val.name)}"></label>
      <label>Gender
        <select name="gender" id="pf-gender">
          ${genders.map((g) => `<option value="${g}"${g === val.gender ? ' selected' : ''}>${g}</option>`).join('')}
        </select>
      </label>
      <label>Age <input name="age" id="pf-age" value="${esc(val.age)}"></label>
      <label>Height (cm) <input name="heightCm" id="pf-height" value="${esc(val.heightCm)}"></label>
      <label>Weight (kg) <input name="weightKg" id="pf-weight" value="${esc(val.weightKg)}"></label>
      <label>Activity
        <select name="activity" id="pf-activity">
          ${activities.map((a) => `<option value="${a}"${a === val.activity ? ' selected' : ''}>${a}</option>`).join('')}
        </select>
      </label>
      <label>Email <input name="email" id="pf-email" value="${esc(val.email)}"></label>
      <p class="error" id="form-error">${esc(state.formError)}</p>
      <button type="submit" id="pf-save">Save</button>
      <button type="button" id="pf-cancel">Cancel</button>
    </form>
  </section>`;
};

const barcodeEntryHtml = (): string => `
  <section data-screen="BarcodeEntry">
    <h1>Capture barcode</h1>
    <label>Barcode digits <input id="barcode-input" inputmode="numeric" value="${esc(state.barcode)}"></label>
    <button id="lookup-btn">Look up</button>
    <label class="upload">Or upload a scan (PGM) <input type="file" id="pgm-input" accept=".pgm"></label>
    <p class="error" id="barcode-error">${esc(state.barcodeError)}</p>
    <button id="bc-back">Back</button>
  </section>`;

const productDetailsHtml = (): string => {
  const product = state.product;
  if (!product) return barcodeEntryHtml();
  const members = state.profiles
    .map(
      (p) => `<label class="member">
        <input type="radio" name="member" value="${esc(p.userId)}"${p.userId === state.memberId ? ' checked' : ''}>
        ${esc(p.name)}
      </label>`,
    )
    .join('');
  return `
  <section data-screen="ProductDetails">
    <h1 id="product-name">${esc(product.name)}</h1>
    <table class="facts">
      <tr><th>Barcode</th><td data-field="gtin">${esc(product.gtin)}</td></tr>
      <tr><th>Energy / 100 g</th><td data-field="energyPer100g">${String(product.energyPer100g)}</td></tr>
      <tr><th>Protein / 100 g</th><td data-field="proteinPer100g">${String(product.proteinPer100g)}</td></tr>
      <tr><th>Fat / 100 g</th><td data-field="fatPer100g">${String(product.fatPer100g)}</td></tr>
      <tr><th>Carbs / 100 g</th><td data-field="carbPer100g">${String(product.carbPer100g)}</td></tr>
    </table>
    <fieldset id="member-pick"><legend>Who is eating it?</legend>${members}</fieldset>
    <button id="pd-continue">Continue</button>
    <button id="pd-back">Back</button>
  </section>`;
};

const quantityCheckHtml = (): string => {
  const member = profileById(state.memberId);
  return `
  <section data-screen="QuantityCheck">
    <h1>How much?</h1>
    <p>${esc(state.product?.name ?? '')} for ${esc(member?.name ?? '')}</p>
    <label>Quantity (g) <input id="qty-input" inputmode="decimal" value="${esc(state.quantityG)}"></label>
    <label>Meal
      <select id="meal-select">
        ${['breakfast', 'lunch', 'dinner']
          .map((m) => `<option value="${m}"${m === state.meal ? ' selected' : ''}>${m}</option>`)
          .join('')}
      </select>
    </label>
    <label>Date <input id="date-input" type="date" value="${esc(state.date)}"></label>
    <p class="error" id="check-error">${esc(state.checkError)}</p>
    <button id="qc-check">Check</button>
    <button id="qc-back">Back</button>
  </section>`;
};

const verdictHtml = (): string => {
  const verdict = state.verdict;
  if (!verdict) return mainMenuHtml();
  const green = verdict.status === 'green';
  const rows = verdict.suggestions
    .map(
      (row) => `<li class="exercise-row">${esc(row.name)}: <span data-minutes>${String(row.minutes)}</span> min</li>`,
    )
    .join('');
  const receipt = state.receipt
    ? `<p id="receipt">Recorded ${esc(state.receipt.entryId)}: <span data-field="energyKcal">${String(
        state.receipt.energyKcal,
      )}</span> kCal${state.receipt.warning ? ` (${esc(state.receipt.warning)})` : ''}</p>`
    : `<button id="consume-btn">${green ? 'Consume' : 'Consume anyway'}</button>`;
  return `
  <section data-screen="Verdict">
    <div class="verdict ${green ? 'verdict-green' : 'verdict-red'}" id="verdict-card">
      <h1>${green ? 'Fits the budget' : 'Over budget'}</h1>
      <dl class="figures">
        <dt>Daily standard</dt><dd data-field="standardKcal">${String(verdict.standardKcal)}</dd>
        <dt>Required today</dt><dd data-field="requiredKcal">${String(verdict.requiredKcal)}</dd>
        <dt>Already consumed</dt><dd data-field="consumedKcal">${String(verdict.consumedKcal)}</dd>
        <dt>This item</dt><dd data-field="candidateKcal">${String(verdict.candidateKcal)}</dd>
        <dt>Balance</dt><dd data-field="balanceKcal">${String(verdict.balanceKcal)}</dd>
      </dl>
      ${
        green
          ? ''
          : `<p class="excess">exceeded by <span data-field="excessKcal">${String(
              verdict.excessKcal,
            )}</span> kCal; to burn it off:</p>
             <ul id="exercise-rows">${rows}</ul>`
      }
      <p class="error" id="consume-error">${esc(state.consumeError)}</p>
      ${receipt}
    </div>
    <button id="vd-again">Scan another</button>
    <button id="vd-menu">Menu</button>
  </section>`;
};

const screenHtml = (): string => {
  switch (state.screen) {
    case 'Welcome':
      return welcomeHtml();
    case 'MainMenu':
      return mainMenuHtml();
    case 'ProfileForm':
      return profileFormHtml();
    case 'BarcodeEntry':
      return barcodeEntryHtml();
    case 'ProductDetails':
      return productDetailsHtml();
    case 'QuantityCheck':
      return quantityCheckHtml();
    case 'Verdict':
      return verdictHtml();
  }
};

// ------------------------------------------------------------------ wiring

const on = (selector: string, event: string, handler: (ev: Event) => void): void => {
  rootEl?.querySelector(selector)?.addEventListener(event, handler);
};

const inputValue = (selector: string): string =>
  rootEl?.querySelector<HTMLInputElement | HTMLSelectElement>(selector)?.value ?? '';

function wire(): void {
  switch (state.screen) {
    case 'Welcome':
      on('#welcome', 'click', () => void enterMainMenu());
      break;
    case 'MainMenu':
      on('#btn-capture', 'click', () => openBarcodeEntry());
      on('#btn-create', 'click', () => openProfileForm(''));
      on('#btn-update', 'click', () => openProfileForm(state.profiles[0]?.userId ?? ''));
      break;
    case 'ProfileForm':
      on('#edit-select', 'change', () => {
        state.editingId = inputValue('#edit-select');
        render();
      });
      on('#profile-form', 'submit', (ev) => {
        ev.preventDefault();
        void submitProfile({
          name: inputValue('#pf-name'),
          gender: inputValue('#pf-gender'),
          age: inputValue('#pf-age'),
          heightCm: inputValue('#pf-height'),
          weightKg: inputValue('#pf-weight'),
          activity: inputValue('#pf-activity'),
          email: inputValue('#pf-email'),
        });
      });
      on('#pf-cancel', 'click', () => void enterMainMenu());
      break;
    case 'BarcodeEntry':
      on('#barcode-input', 'input', () => {
        state.barcode = inputValue('#barcode-input');
      });
      on('#lookup-btn', 'click', () => void lookupProduct());
      on('#pgm-input', 'change', (ev) => {
        const picker = ev.target as HTMLInputElement;
        const file = picker.files && picker.files[0];
        if (file) void uploadImage(file);
      });
      on('#bc-back', 'click', () => void enterMainMenu());
      break;
    case 'ProductDetails':
      rootEl?.querySelectorAll<HTMLInputElement>('input[name="member"]').forEach((radio) => {
        radio.addEventListener('change', () => {
          state.memberId = radio.value;
        });
      });
      on('#pd-continue', 'click', () => openQuantityCheck());
      on('#pd-back', 'click', () => openBarcodeEntry());
      break;
    case 'QuantityCheck':
      on('#qty-input', 'input', () => {
        state.quantityG = inputValue('#qty-input');
      });
      on('#meal-select', 'change', () => {
        state.meal = inputValue('#meal-select');
      });
      on('#date-input', 'input', () => {
        state.date = inputValue('#date-input');
      });
      on('#qc-check', 'click', () => void runCheck());
      on('#qc-back', 'click', () => {
        state.screen = 'ProductDetails';
        render();
      });
      break;
    case 'Verdict':
      on('#consume-btn', 'click', () => void recordConsumption());
      on('#vd-again', 'click', () => openBarcodeEntry());
      on('#vd-menu', 'click', () => void enterMainMenu());
      break;
  }
  on('#retry-btn', 'click', () => state.banner?.retry());
}

function render(): void {
  if (!rootEl) return;
  rootEl.innerHTML = bannerHtml() + screenHtml();
  wire();
}

export function init(root: HTMLElement, opts: InitOptions = {}): void {
  rootEl = root;
  if (opts.apiBase !== undefined) setApiBase(opts.apiBase);
  state = freshState();
  render();
  const delay = opts.welcomeDelayMs ?? 2500;
  window.setTimeout(() => {
    if (state.screen === 'Welcome') void enterMainMenu();
  }, delay);
}
