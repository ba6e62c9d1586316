import { init } from './app.js';

declare global {
  interface Window {
    HEALTHWISE_API?: string;
  }
}

const root = document.querySelector<HTMLDivElement>('#app');
if (!root) throw new Error('missing #app mount point');

// The page is static and served separately from the API process, so the
// server origin comes from a global set in index.html (default: local dev).
init(root, { apiBase: window.HEALTHWISE_API ?? 'http://127.0.0.1:8080' });
