import { App } from './app.js';

const root = document.getElementById('app');
if (root) {
  App.boot(root, { baseUrl: '' }).catch((err) => {
    root.textContent = `Could not reach the gateway: ${err}`;
  });
}
